#pragma once

#include "deepedge/compute/compute_model.hpp"
#include "deepedge/network/network_model.hpp"
#include "deepedge/workload/task.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace deepedge::orchestration {

/// Fixed feature positions; edge server loads follow from kEdgeLoadBase.
enum Feature : std::size_t {
    kWanBandwidth = 0,
    kManDelay = 1,
    kTaskReqCapacity = 2,
    kWlanId = 3,
    kDelaySensitivity = 4,
    kTasksToWlan = 5,
    kTasksToMan = 6,
    kTasksToWan = 7,
    kActiveManTasks = 8,
    kEdgeLoadBase = 9,
};

inline constexpr std::size_t kStaticFeatureCount = 9;

/// Reported in place of the MAN delay while the MAN queue is unstable.
inline constexpr double kSaturatedManDelayS = 1.0;

/// Observation at a decision point: 9 fixed features plus one load per edge server.
class StateVector {
public:
    StateVector() = default;
    explicit StateVector(std::uint32_t edge_server_count)
        : values_(kStaticFeatureCount + edge_server_count, 0.0) {}
    explicit StateVector(std::vector<double> values) : values_(std::move(values)) {}

    std::uint32_t edge_server_count() const {
        return static_cast<std::uint32_t>(values_.size() - kStaticFeatureCount);
    }
    std::size_t size() const { return values_.size(); }

    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }

    double edge_load(std::uint32_t server) const { return values_[kEdgeLoadBase + server]; }
    std::span<const double> edge_loads() const {
        return std::span<const double>(values_).subspan(kEdgeLoadBase);
    }
    double mean_edge_load() const;

    std::span<const double> values() const { return values_; }

    friend bool operator==(const StateVector&, const StateVector&) = default;

private:
    std::vector<double> values_;
};

/// Index in [0, N]: 0..N-1 are edge servers, N is the cloud.
struct Action {
    std::uint32_t index = 0;

    static Action cloud(std::uint32_t edge_server_count) { return {edge_server_count}; }
    bool is_cloud(std::uint32_t edge_server_count) const { return index == edge_server_count; }
    friend bool operator==(const Action&, const Action&) = default;
};

/// Cumulative offload tallies: home edge (WLAN), other edge (MAN), cloud (WAN).
struct OffloadCounters {
    std::uint64_t to_wlan = 0;
    std::uint64_t to_man = 0;
    std::uint64_t to_wan = 0;

    void record(Action action, std::uint32_t home_server, std::uint32_t edge_server_count);
    std::uint64_t total() const { return to_wlan + to_man + to_wan; }
};

/// Snapshot of every feature at decision time for `task`.
StateVector build_state(const workload::Task& task, const network::NetworkModel& network,
                        const compute::ComputeModel& compute, const OffloadCounters& counters,
                        double now);

/// Per-server admission headroom for the task's edge requirement.
std::vector<bool> edge_headroom(const workload::Task& task, const compute::ComputeModel& compute);

} // namespace deepedge::orchestration
