#pragma once

#include "deepedge/compute/compute_model.hpp"
#include "deepedge/experiment/config.hpp"
#include "deepedge/network/network_model.hpp"
#include "deepedge/orchestration/orchestrator.hpp"
#include "deepedge/sim/engine.hpp"
#include "deepedge/sim/rng.hpp"
#include "deepedge/workload/workload.hpp"

#include <array>
#include <functional>
#include <iosfwd>
#include <vector>

namespace deepedge::experiment {

struct OutcomeCounts {
    std::uint64_t generated = 0;
    std::uint64_t success = 0;
    std::uint64_t fail_capacity = 0;
    std::uint64_t fail_deadline = 0;
    std::uint64_t fail_mobility = 0;
    std::uint64_t in_flight = 0;

    double service_time_sum = 0.0;
    double processing_edge_sum = 0.0;
    std::uint64_t processing_edge_count = 0;
    double processing_cloud_sum = 0.0;
    std::uint64_t processing_cloud_count = 0;

    std::uint64_t failed() const { return fail_capacity + fail_deadline + fail_mobility; }
    std::uint64_t finished() const { return success + failed(); }
    /// Failed share of the tasks that finished before the horizon, in percent.
    double failed_pct() const;
    double avg_service_time() const;
    double avg_processing_edge() const;
    double avg_processing_cloud() const;

    void add(workload::TaskOutcome outcome);
};

/// Everything one simulation run produces.
struct RunMetrics {
    OutcomeCounts overall;
    std::array<OutcomeCounts, workload::kAppCount> per_app{};
    double vm_util_edge_pct = 0.0;
    double vm_util_cloud_pct = 0.0;
    double cumulative_reward = 0.0;
    orchestration::OffloadCounters offloads;
    std::uint64_t events = 0;
};

/// Called after every offloading decision.
using DecisionObserver = std::function<void(const workload::Task&,
                                            const orchestration::StateVector&,
                                            orchestration::Action)>;

/// One episode of the three-tier scenario driven by a given orchestrator.
///
/// Random streams are keyed by the seed alone, so every orchestrator run at
/// the same (device count, seed) sees the same arrivals and movements.
class EdgeSimulation {
public:
    EdgeSimulation(const ScenarioConfig& config, std::size_t device_count, std::uint64_t seed,
                   orchestration::Orchestrator& orchestrator);

    /// Delimited trace of every dispatched event.
    void set_event_trace(std::ostream* trace);
    void set_decision_observer(DecisionObserver observer) { observer_ = std::move(observer); }

    /// Runs to the horizon and then signals the end of the episode.
    RunMetrics run();

    const std::vector<workload::Task>& tasks() const { return tasks_; }
    const std::vector<workload::MobileDevice>& devices() const { return devices_; }

private:
    struct TaskRuntime {
        network::Route route = network::Route::HomeEdge;
        compute::HostRef host;
        network::Transfer transfer;
        std::optional<compute::VmRef> vm;
        double processing_time_s = 0.0;
    };

    void dispatch(const sim::SimEvent& event);
    void on_arrival(std::uint32_t device_id);
    void on_upload_complete(std::uint64_t task_id);
    void on_processing_complete(std::uint64_t task_id);
    void on_download_complete(std::uint64_t task_id);
    void on_mobility(std::uint32_t device_id);
    void finish(std::uint64_t task_id, workload::TaskOutcome outcome);

    const ScenarioConfig& config_;
    orchestration::Orchestrator& orchestrator_;
    sim::Engine engine_;
    sim::RngStream workload_rng_;
    sim::RngStream mobility_rng_;
    network::NetworkModel network_;
    compute::ComputeModel compute_;
    workload::MobilityParams mobility_;
    std::vector<workload::MobileDevice> devices_;
    std::vector<workload::Task> tasks_;
    std::vector<TaskRuntime> runtime_;
    orchestration::OffloadCounters counters_;
    std::size_t devices_still_generating_ = 0;
    DecisionObserver observer_;
    std::ostream* event_trace_ = nullptr;
    RunMetrics metrics_;
    bool ran_ = false;
};

} // namespace deepedge::experiment
