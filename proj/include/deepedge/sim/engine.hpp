#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <string_view>
#include <vector>

namespace deepedge::sim {

enum class EventKind : std::uint8_t {
    TaskArrivalAtOrchestrator,
    UploadComplete,
    ProcessingComplete,
    DownloadComplete,
    MobilityMove,
    EpisodeEnd,
};

std::string_view to_string(EventKind kind);

struct SimEvent {
    double fire_time = 0.0;
    std::uint64_t sequence = 0;
    EventKind kind = EventKind::EpisodeEnd;
    // Task id or device id, depending on kind.
    std::uint64_t payload = 0;
};

/// Deterministic discrete-event kernel.
///
/// Events dispatch in (fire_time, sequence) order; sequence is the
/// insertion counter, so simultaneous events run FIFO.
class Engine {
public:
    using Handler = std::function<void(const SimEvent&)>;

    Engine() = default;
    explicit Engine(Handler handler) : handler_(std::move(handler)) {}

    void set_handler(Handler handler) { handler_ = std::move(handler); }

    /// Optional hook called before each dispatch (used for trace capture).
    void set_observer(Handler observer) { observer_ = std::move(observer); }

    /// Throws SchedulingInPast if fire_time < now(). Returns the event's sequence.
    std::uint64_t schedule(double fire_time, EventKind kind, std::uint64_t payload);

    /// Dispatches every event with fire_time <= t_end and returns how many ran.
    std::size_t run_until(double t_end);

    double now() const { return now_; }
    std::size_t pending() const { return queue_.size(); }

private:
    struct Later {
        bool operator()(const SimEvent& a, const SimEvent& b) const {
            if (a.fire_time != b.fire_time) {
                return a.fire_time > b.fire_time;
            }
            return a.sequence > b.sequence;
        }
    };

    std::priority_queue<SimEvent, std::vector<SimEvent>, Later> queue_;
    Handler handler_;
    Handler observer_;
    double now_ = 0.0;
    std::uint64_t next_sequence_ = 0;
};

} // namespace deepedge::sim
