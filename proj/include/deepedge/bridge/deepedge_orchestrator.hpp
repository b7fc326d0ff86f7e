#pragma once

#include "deepedge/agent/ddqn_agent.hpp"
#include "deepedge/bridge/delayed_action_bridge.hpp"
#include "deepedge/orchestration/orchestrator.hpp"

namespace deepedge::bridge {

/// Online-training orchestrator: epsilon-greedy decisions through the
/// delayed-action bridge, one minibatch update per forwarded memory item.
class DeepEdgeOrchestrator final : public orchestration::Orchestrator, private Learner {
public:
    DeepEdgeOrchestrator(agent::DdqnAgent& agent, agent::Normalizer normalizer, double epsilon,
                         sim::RngStream& exploration_rng, sim::RngStream& replay_rng);

    std::string_view name() const override { return "deepedge"; }

    orchestration::Action on_task_arrival(const orchestration::DecisionContext& context,
                                          orchestration::OffloadCounters& counters) override;
    void on_task_finished(const workload::Task& task, bool success) override;
    void on_episode_end() override;

    DelayedActionBridge& bridge() { return bridge_; }
    const DelayedActionBridge& bridge() const { return bridge_; }

    std::uint64_t training_steps() const { return training_steps_; }
    double mean_td_error() const {
        return training_steps_ == 0 ? 0.0 : td_error_sum_ / static_cast<double>(training_steps_);
    }

private:
    orchestration::Action act(const orchestration::StateVector& state) override;
    void learn(const MemoryItem& item) override;

    agent::DdqnAgent& agent_;
    agent::Normalizer normalizer_;
    double epsilon_;
    sim::RngStream& exploration_rng_;
    sim::RngStream& replay_rng_;
    DelayedActionBridge bridge_;
    std::uint64_t training_steps_ = 0;
    double td_error_sum_ = 0.0;
};

/// Frozen policy: argmax of the online network, no exploration or learning.
class GreedyDeepEdgeOrchestrator final : public orchestration::Orchestrator {
public:
    GreedyDeepEdgeOrchestrator(const nn::DenseNetwork& network, agent::Normalizer normalizer)
        : network_(network), normalizer_(std::move(normalizer)) {}

    std::string_view name() const override { return "deepedge"; }

    orchestration::Action on_task_arrival(const orchestration::DecisionContext& context,
                                          orchestration::OffloadCounters& counters) override;

private:
    const nn::DenseNetwork& network_;
    agent::Normalizer normalizer_;
};

} // namespace deepedge::bridge
