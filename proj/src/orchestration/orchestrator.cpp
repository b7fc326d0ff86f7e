#include "deepedge/orchestration/orchestrator.hpp"

namespace deepedge::orchestration {

Action RuleBasedOrchestrator::on_task_arrival(const DecisionContext& context,
                                              OffloadCounters& counters) {
    const Action action = choose(context);
    counters.record(action, context.task.home_wlan_id, context.state.edge_server_count());
    return action;
}

std::uint32_t least_loaded_edge(const StateVector& state, std::span<const bool> headroom) {
    const std::uint32_t n = state.edge_server_count();
    auto pick = [&](bool require_headroom) -> std::optional<std::uint32_t> {
        std::optional<std::uint32_t> best;
        for (std::uint32_t j = 0; j < n; ++j) {
            if (require_headroom && !headroom.empty() && !headroom[j]) {
                continue;
            }
            if (!best || state.edge_load(j) < state.edge_load(*best)) {
                best = j;
            }
        }
        return best;
    };
    if (auto j = pick(true)) {
        return *j;
    }
    return pick(false).value_or(0);
}

Action decide_network_based(const StateVector& state, std::span<const bool> headroom,
                            const BaselineThresholds& thresholds) {
    const std::uint32_t n = state.edge_server_count();
    if (n == 0 || state[kWanBandwidth] > thresholds.wan_bandwidth_mbps) {
        return Action::cloud(n);
    }
    return Action{least_loaded_edge(state, headroom)};
}

Action decide_utilization_based(const StateVector& state, std::span<const bool> headroom,
                                const BaselineThresholds& thresholds) {
    const std::uint32_t n = state.edge_server_count();
    if (n == 0 || state.mean_edge_load() >= thresholds.edge_utilization_pct) {
        return Action::cloud(n);
    }
    return Action{least_loaded_edge(state, headroom)};
}

Action decide_hybrid(const StateVector& state, std::span<const bool> headroom,
                     const BaselineThresholds& thresholds) {
    const std::uint32_t n = state.edge_server_count();
    const bool wan_has_room = state[kWanBandwidth] > thresholds.wan_bandwidth_mbps;
    const bool edge_is_busy = state.mean_edge_load() >= thresholds.edge_utilization_pct;
    if (n == 0 || (wan_has_room && edge_is_busy)) {
        return Action::cloud(n);
    }
    return Action{least_loaded_edge(state, headroom)};
}

Action decide_random(const StateVector& state, sim::RngStream& rng) {
    const std::uint32_t n = state.edge_server_count();
    return Action{static_cast<std::uint32_t>(rng.uniform_index(std::uint64_t{n} + 1))};
}

std::unique_ptr<Orchestrator> make_baseline(std::string_view name, std::uint64_t seed,
                                            const BaselineThresholds& thresholds) {
    if (name == "network") {
        return std::make_unique<NetworkBasedOrchestrator>(thresholds);
    }
    if (name == "utilization") {
        return std::make_unique<UtilizationBasedOrchestrator>(thresholds);
    }
    if (name == "hybrid") {
        return std::make_unique<HybridOrchestrator>(thresholds);
    }
    if (name == "random") {
        return std::make_unique<RandomOrchestrator>(seed);
    }
    return nullptr;
}

} // namespace deepedge::orchestration
