#include "deepedge/sim/rng.hpp"

#include <cassert>
#include <cmath>

namespace deepedge::sim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

} // namespace

std::uint64_t derive_stream_seed(std::string_view name, std::uint64_t seed) {
    return splitmix64(splitmix64(seed) ^ fnv1a(name));
}

RngStream::RngStream(std::string_view name, std::uint64_t seed)
    : name_(name), seed_(seed), engine_(derive_stream_seed(name, seed)) {}

double RngStream::uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::uniform_index(std::uint64_t bound) {
    assert(bound > 0);
    // Rejection keeps the draw unbiased for bounds that do not divide 2^64.
    const std::uint64_t limit = std::uint64_t(0) - (std::uint64_t(0) - bound) % bound;
    for (;;) {
        const std::uint64_t x = engine_();
        if (limit == 0 || x < limit) {
            return x % bound;
        }
    }
}

double RngStream::exponential(double mean) {
    // 1 - u lies in (0, 1], so the log is finite.
    double sample = 0.0;
    do {
        sample = -mean * std::log(1.0 - uniform01());
    } while (sample <= 0.0);
    return sample;
}

} // namespace deepedge::sim
