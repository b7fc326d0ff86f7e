#pragma once

#include "deepedge/orchestration/state.hpp"
#include "deepedge/workload/task.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <unordered_map>

namespace deepedge::bridge {

using orchestration::Action;
using orchestration::StateVector;

/// The (state, next_state, action, value, is_done) tuple, filled in as the
/// pieces become known.
struct MemoryItem {
    std::uint64_t state_id = 0;
    std::uint64_t task_id = 0;
    std::optional<StateVector> state;
    std::optional<StateVector> next_state;
    std::optional<std::uint64_t> next_state_id;
    std::optional<Action> action;
    std::optional<double> value;
    bool is_done = false;

    bool complete() const { return state && next_state && action && value; }
};

/// Receives decisions requests and completed memory items.
class Learner {
public:
    virtual ~Learner() = default;
    virtual Action act(const StateVector& state) = 0;
    virtual void learn(const MemoryItem& item) = 0;
};

/// Bridges the gap between an offloading decision and its observed outcome.
///
/// Each decision opens a memory item keyed by its decision index. The next
/// decision supplies its next_state; the task's completion supplies its
/// reward. Whichever arrives last hands the item to the learner, exactly
/// once, after which the ledger entry is dropped.
class DelayedActionBridge {
public:
    explicit DelayedActionBridge(Learner& learner) : learner_(learner) {}

    /// Optional delimited trace, one line per ledger mutation.
    void set_trace(std::ostream* trace);

    /// Builds the item for `state`, asks the learner for an action, bumps the
    /// matching offload counter and links the previous item to this state.
    Action on_task_arrival(const workload::Task& task, const StateVector& state,
                           orchestration::OffloadCounters& counters);

    /// Attaches +1/-1 to the task's item; forwards it if next_state is known.
    /// Throws UnknownTask for tasks that never went through on_task_arrival.
    void on_task_completion(const workload::Task& task, bool success, bool is_last);

    /// Forwards the final decision's item (if it already has a value) as a
    /// terminal sample that loops onto its own state, then clears the ledger.
    std::size_t flush_at_episode_end();

    std::uint64_t decisions() const { return next_state_id_; }
    std::uint64_t forwarded() const { return forwarded_; }
    std::size_t open_items() const { return state_to_item_.size(); }

private:
    void forward(MemoryItem& item);
    void trace_line(std::string_view kind, const MemoryItem& item,
                    std::optional<std::uint64_t> next_id = std::nullopt);

    Learner& learner_;
    std::ostream* trace_ = nullptr;
    std::map<std::uint64_t, MemoryItem> state_to_item_;
    std::unordered_map<std::uint64_t, std::uint64_t> task_to_state_;
    std::optional<std::uint64_t> last_state_id_;
    std::uint64_t next_state_id_ = 0;
    std::uint64_t forwarded_ = 0;
};

} // namespace deepedge::bridge
