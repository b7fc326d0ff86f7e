#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace deepedge::sim {

/// A named, seeded random stream.
///
/// Only the raw 64-bit output of std::mt19937_64 is used; every derived
/// distribution is computed here so sequences are identical on any
/// conforming standard library.
class RngStream {
public:
    RngStream(std::string_view name, std::uint64_t seed);

    const std::string& name() const { return name_; }
    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform01();

    /// Uniform integer on [0, bound). bound must be positive.
    std::uint64_t uniform_index(std::uint64_t bound);

    /// Exponential with the given mean; always strictly positive.
    double exponential(double mean);

private:
    std::string name_;
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

/// Mixes a run seed with a stream name into the generator seed.
std::uint64_t derive_stream_seed(std::string_view name, std::uint64_t seed);

} // namespace deepedge::sim
