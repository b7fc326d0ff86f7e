#pragma once

#include "deepedge/sim/rng.hpp"

#include <cstdint>
#include <vector>

namespace deepedge::agent {

/// One completed learning sample (normalized states).
struct Transition {
    std::vector<double> state;
    std::uint32_t action = 0;
    double reward = 0.0;
    std::vector<double> next_state;
    bool is_done = false;
};

/// Fixed-capacity ring; once full, each push evicts the oldest sample.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity);

    void push(Transition transition);

    std::size_t size() const { return storage_.size(); }
    std::size_t capacity() const { return capacity_; }
    bool empty() const { return storage_.empty(); }

    /// i = 0 is the oldest retained sample.
    const Transition& at(std::size_t i) const;

    /// Uniform draw with replacement.
    const Transition& sample(sim::RngStream& rng) const;

private:
    std::size_t capacity_;
    std::vector<Transition> storage_;
    std::size_t head_ = 0;  // oldest element once full
};

/// current = max(floor, initial * decay_factor^k) after k decay steps.
class EpsilonSchedule {
public:
    EpsilonSchedule(double initial = 1.0, double decay_factor = 0.99, double floor = 0.1);

    double current() const;
    void decay() { ++steps_; }
    std::uint64_t steps() const { return steps_; }
    void set_steps(std::uint64_t steps) { steps_ = steps; }

    double initial() const { return initial_; }
    double decay_factor() const { return decay_factor_; }
    double floor() const { return floor_; }

private:
    double initial_;
    double decay_factor_;
    double floor_;
    std::uint64_t steps_ = 0;
};

} // namespace deepedge::agent
