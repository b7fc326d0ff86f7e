#include "deepedge/sim/engine.hpp"

#include "deepedge/error.hpp"

#include <algorithm>
#include <string>

namespace deepedge::sim {

std::string_view to_string(EventKind kind) {
    switch (kind) {
    case EventKind::TaskArrivalAtOrchestrator: return "TaskArrivalAtOrchestrator";
    case EventKind::UploadComplete: return "UploadComplete";
    case EventKind::ProcessingComplete: return "ProcessingComplete";
    case EventKind::DownloadComplete: return "DownloadComplete";
    case EventKind::MobilityMove: return "MobilityMove";
    case EventKind::EpisodeEnd: return "EpisodeEnd";
    }
    return "Unknown";
}

std::uint64_t Engine::schedule(double fire_time, EventKind kind, std::uint64_t payload) {
    if (!(fire_time >= now_)) {
        throw SchedulingInPast("event at t=" + std::to_string(fire_time) +
                               " scheduled while clock is at t=" + std::to_string(now_));
    }
    const std::uint64_t sequence = next_sequence_++;
    queue_.push(SimEvent{fire_time, sequence, kind, payload});
    return sequence;
}

std::size_t Engine::run_until(double t_end) {
    std::size_t dispatched = 0;
    while (!queue_.empty() && queue_.top().fire_time <= t_end) {
        const SimEvent event = queue_.top();
        queue_.pop();
        now_ = event.fire_time;
        if (observer_) {
            observer_(event);
        }
        if (handler_) {
            handler_(event);
        }
        ++dispatched;
    }
    now_ = std::max(now_, t_end);
    return dispatched;
}

} // namespace deepedge::sim
