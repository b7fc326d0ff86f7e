#include "deepedge/bridge/delayed_action_bridge.hpp"

#include "deepedge/error.hpp"

#include <ostream>
#include <string>

namespace deepedge::bridge {

void DelayedActionBridge::set_trace(std::ostream* trace) {
    trace_ = trace;
    if (trace_) {
        *trace_ << "kind,state_id,task_id,action,reward,is_done,next_state_id\n";
    }
}

void DelayedActionBridge::trace_line(std::string_view kind, const MemoryItem& item,
                                     std::optional<std::uint64_t> next_id) {
    if (!trace_) {
        return;
    }
    *trace_ << kind << ',' << item.state_id << ',' << item.task_id << ',';
    if (item.action) {
        *trace_ << item.action->index;
    }
    *trace_ << ',';
    if (item.value) {
        *trace_ << (*item.value > 0 ? "1" : "-1");
    }
    *trace_ << ',' << (item.is_done ? 1 : 0) << ',';
    if (next_id) {
        *trace_ << *next_id;
    }
    *trace_ << '\n';
}

Action DelayedActionBridge::on_task_arrival(const workload::Task& task, const StateVector& state,
                                            orchestration::OffloadCounters& counters) {
    const Action action = learner_.act(state);
    counters.record(action, task.home_wlan_id, state.edge_server_count());

    const std::uint64_t state_id = next_state_id_++;
    MemoryItem item;
    item.state_id = state_id;
    item.task_id = task.task_id;
    item.state = state;
    item.action = action;
    auto& stored = state_to_item_.emplace(state_id, std::move(item)).first->second;
    trace_line("arrival", stored);

    if (last_state_id_) {
        auto prev = state_to_item_.find(*last_state_id_);
        if (prev != state_to_item_.end()) {
            prev->second.next_state = state;
            prev->second.next_state_id = state_id;
            trace_line("link", prev->second, state_id);
            if (prev->second.complete()) {
                forward(prev->second);
                state_to_item_.erase(prev);
            }
        }
    }
    last_state_id_ = state_id;
    task_to_state_.emplace(task.task_id, state_id);
    return action;
}

void DelayedActionBridge::on_task_completion(const workload::Task& task, bool success,
                                             bool is_last) {
    auto ledger = task_to_state_.find(task.task_id);
    if (ledger == task_to_state_.end()) {
        throw UnknownTask("task " + std::to_string(task.task_id) + " has no ledger entry");
    }
    const std::uint64_t state_id = ledger->second;
    task_to_state_.erase(ledger);

    auto it = state_to_item_.find(state_id);
    if (it == state_to_item_.end()) {
        return;
    }
    MemoryItem& item = it->second;
    item.value = success ? 1.0 : -1.0;
    if (is_last) {
        item.is_done = true;
    }
    trace_line("value", item);
    if (item.next_state) {
        forward(item);
        state_to_item_.erase(it);
    }
}

std::size_t DelayedActionBridge::flush_at_episode_end() {
    std::size_t count = 0;
    for (auto& [id, item] : state_to_item_) {
        const bool final_item = last_state_id_ && id == *last_state_id_;
        if (final_item && item.value && !item.next_state) {
            item.is_done = true;
            item.next_state = item.state;
            item.next_state_id = id;
            trace_line("link", item, id);
        }
        if (item.complete()) {
            forward(item);
            ++count;
        } else {
            trace_line("drop", item);
        }
    }
    state_to_item_.clear();
    task_to_state_.clear();
    last_state_id_.reset();
    return count;
}

void DelayedActionBridge::forward(MemoryItem& item) {
    trace_line("forward", item, item.next_state_id);
    learner_.learn(item);
    ++forwarded_;
}

} // namespace deepedge::bridge
