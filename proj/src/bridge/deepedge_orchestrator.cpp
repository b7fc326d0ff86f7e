#include "deepedge/bridge/deepedge_orchestrator.hpp"

namespace deepedge::bridge {

DeepEdgeOrchestrator::DeepEdgeOrchestrator(agent::DdqnAgent& agent, agent::Normalizer normalizer,
                                           double epsilon, sim::RngStream& exploration_rng,
                                           sim::RngStream& replay_rng)
    : agent_(agent),
      normalizer_(std::move(normalizer)),
      epsilon_(epsilon),
      exploration_rng_(exploration_rng),
      replay_rng_(replay_rng),
      bridge_(*this) {}

orchestration::Action DeepEdgeOrchestrator::on_task_arrival(
    const orchestration::DecisionContext& context, orchestration::OffloadCounters& counters) {
    return bridge_.on_task_arrival(context.task, context.state, counters);
}

void DeepEdgeOrchestrator::on_task_finished(const workload::Task& task, bool success) {
    bridge_.on_task_completion(task, success, task.is_last);
}

void DeepEdgeOrchestrator::on_episode_end() {
    bridge_.flush_at_episode_end();
}

orchestration::Action DeepEdgeOrchestrator::act(const orchestration::StateVector& state) {
    return {agent_.act(normalizer_(state), epsilon_, exploration_rng_)};
}

void DeepEdgeOrchestrator::learn(const MemoryItem& item) {
    agent_.remember(agent::Transition{normalizer_(*item.state), item.action->index, *item.value,
                                      normalizer_(*item.next_state), item.is_done});
    if (agent_.replay().size() >= agent_.config().minibatch_size) {
        td_error_sum_ += agent_.train_minibatch(replay_rng_);
        ++training_steps_;
    }
}

orchestration::Action GreedyDeepEdgeOrchestrator::on_task_arrival(
    const orchestration::DecisionContext& context, orchestration::OffloadCounters& counters) {
    const auto q = network_.forward(normalizer_(context.state));
    const orchestration::Action action{agent::argmax(q)};
    counters.record(action, context.task.home_wlan_id, context.state.edge_server_count());
    return action;
}

} // namespace deepedge::bridge
