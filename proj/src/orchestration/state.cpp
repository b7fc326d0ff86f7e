#include "deepedge/orchestration/state.hpp"

#include <numeric>

namespace deepedge::orchestration {

double StateVector::mean_edge_load() const {
    const auto loads = edge_loads();
    if (loads.empty()) {
        return 0.0;
    }
    return std::accumulate(loads.begin(), loads.end(), 0.0) / static_cast<double>(loads.size());
}

void OffloadCounters::record(Action action, std::uint32_t home_server,
                             std::uint32_t edge_server_count) {
    if (action.is_cloud(edge_server_count)) {
        ++to_wan;
    } else if (action.index == home_server) {
        ++to_wlan;
    } else {
        ++to_man;
    }
}

StateVector build_state(const workload::Task& task, const network::NetworkModel& network,
                        const compute::ComputeModel& compute, const OffloadCounters& counters,
                        double now) {
    StateVector state(compute.edge_server_count());
    state[kWanBandwidth] = network.remaining_wan_bandwidth(task.home_wlan_id);
    state[kManDelay] = network.current_man_delay(now).value_or(kSaturatedManDelayS);
    state[kTaskReqCapacity] = task.required_capacity_edge_pct;
    state[kWlanId] = static_cast<double>(task.home_wlan_id);
    state[kDelaySensitivity] = task.delay_sensitivity;
    state[kTasksToWlan] = static_cast<double>(counters.to_wlan);
    state[kTasksToMan] = static_cast<double>(counters.to_man);
    state[kTasksToWan] = static_cast<double>(counters.to_wan);
    state[kActiveManTasks] = static_cast<double>(network.active_man_transfers());
    for (std::uint32_t j = 0; j < compute.edge_server_count(); ++j) {
        state[kEdgeLoadBase + j] = compute.server_load(j);
    }
    return state;
}

std::vector<bool> edge_headroom(const workload::Task& task, const compute::ComputeModel& compute) {
    std::vector<bool> room(compute.edge_server_count());
    for (std::uint32_t j = 0; j < room.size(); ++j) {
        room[j] = compute.has_headroom(j, task.required_capacity_edge_pct);
    }
    return room;
}

} // namespace deepedge::orchestration
