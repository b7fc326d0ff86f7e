#include "deepedge/agent/replay_buffer.hpp"

#include "deepedge/error.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace deepedge::agent {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0) {
        throw InvalidConfig("replay capacity must be positive");
    }
}

void ReplayBuffer::push(Transition transition) {
    if (storage_.size() < capacity_) {
        storage_.push_back(std::move(transition));
        return;
    }
    storage_[head_] = std::move(transition);
    head_ = (head_ + 1) % capacity_;
}

const Transition& ReplayBuffer::at(std::size_t i) const {
    if (i >= storage_.size()) {
        throw std::out_of_range("replay index out of range");
    }
    return storage_[(head_ + i) % storage_.size()];
}

const Transition& ReplayBuffer::sample(sim::RngStream& rng) const {
    if (storage_.empty()) {
        throw InsufficientExperience("replay buffer is empty");
    }
    return storage_[rng.uniform_index(storage_.size())];
}

EpsilonSchedule::EpsilonSchedule(double initial, double decay_factor, double floor)
    : initial_(initial), decay_factor_(decay_factor), floor_(floor) {
    if (!(decay_factor_ > 0.0 && decay_factor_ <= 1.0) || floor_ < 0.0 || initial_ > 1.0 ||
        floor_ > initial_) {
        throw InvalidConfig("epsilon schedule needs 0 <= floor <= initial <= 1 and decay in (0,1]");
    }
}

double EpsilonSchedule::current() const {
    return std::max(floor_, initial_ * std::pow(decay_factor_, static_cast<double>(steps_)));
}

} // namespace deepedge::agent
