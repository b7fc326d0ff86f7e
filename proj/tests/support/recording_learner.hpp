#pragma once

#include "deepedge/bridge/delayed_action_bridge.hpp"
#include "deepedge/orchestration/orchestrator.hpp"
#include "deepedge/sim/rng.hpp"

#include <map>
#include <vector>

namespace testing_support {

using deepedge::bridge::MemoryItem;
using deepedge::orchestration::Action;
using deepedge::orchestration::StateVector;

// Picks uniform random actions and keeps every forwarded item.
class RecordingLearner : public deepedge::bridge::Learner {
public:
    explicit RecordingLearner(std::uint64_t seed) : rng_("orchestrator-random", seed) {}

    Action act(const StateVector& state) override {
        return {static_cast<std::uint32_t>(rng_.uniform_index(state.edge_server_count() + 1))};
    }
    void learn(const MemoryItem& item) override { items.push_back(item); }

    std::vector<MemoryItem> items;

private:
    deepedge::sim::RngStream rng_;
};

// Orchestrator adapter that routes through a bridge with a recording learner.
class BridgedRandomOrchestrator : public deepedge::orchestration::Orchestrator {
public:
    explicit BridgedRandomOrchestrator(std::uint64_t seed) : learner(seed), bridge(learner) {}

    std::string_view name() const override { return "bridged-random"; }
    Action on_task_arrival(const deepedge::orchestration::DecisionContext& ctx,
                           deepedge::orchestration::OffloadCounters& counters) override {
        states[bridge.decisions()] = ctx.state;
        return bridge.on_task_arrival(ctx.task, ctx.state, counters);
    }
    void on_task_finished(const deepedge::workload::Task& task, bool success) override {
        ++finished;
        bridge.on_task_completion(task, success, task.is_last);
    }
    void on_episode_end() override { flushed = bridge.flush_at_episode_end(); }

    RecordingLearner learner;
    deepedge::bridge::DelayedActionBridge bridge;
    std::map<std::uint64_t, StateVector> states;  // decision index -> state
    std::size_t finished = 0;
    std::size_t flushed = 0;
};

} // namespace testing_support
