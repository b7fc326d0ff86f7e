#include "deepedge/experiment/simulation.hpp"

#include "deepedge/error.hpp"

#include <algorithm>
#include <cstdio>
#include <memory>
#include <ostream>

namespace deepedge::experiment {

using sim::EventKind;
using workload::TaskOutcome;

double OutcomeCounts::failed_pct() const {
    const auto done = finished();
    return done == 0 ? 0.0 : 100.0 * static_cast<double>(failed()) / static_cast<double>(done);
}

double OutcomeCounts::avg_service_time() const {
    return success == 0 ? 0.0 : service_time_sum / static_cast<double>(success);
}

double OutcomeCounts::avg_processing_edge() const {
    return processing_edge_count == 0
               ? 0.0
               : processing_edge_sum / static_cast<double>(processing_edge_count);
}

double OutcomeCounts::avg_processing_cloud() const {
    return processing_cloud_count == 0
               ? 0.0
               : processing_cloud_sum / static_cast<double>(processing_cloud_count);
}

void OutcomeCounts::add(TaskOutcome outcome) {
    switch (outcome) {
    case TaskOutcome::Success: ++success; break;
    case TaskOutcome::FailCapacity: ++fail_capacity; break;
    case TaskOutcome::FailDeadline: ++fail_deadline; break;
    case TaskOutcome::FailMobility: ++fail_mobility; break;
    case TaskOutcome::Pending: ++in_flight; break;
    }
}

EdgeSimulation::EdgeSimulation(const ScenarioConfig& config, std::size_t device_count,
                               std::uint64_t seed, orchestration::Orchestrator& orchestrator)
    : config_(config),
      orchestrator_(orchestrator),
      workload_rng_("workload", seed),
      mobility_rng_("mobility", seed),
      network_(config.network_params(), config.compute.edge_server_count),
      compute_(config.compute),
      mobility_(config.mobility_params()) {
    engine_.set_handler([this](const sim::SimEvent& e) { dispatch(e); });

    devices_ = workload::assign_applications(device_count, config_.profiles, config_.duty_factor,
                                             workload_rng_);
    for (auto& device : devices_) {
        const auto placed = workload::initial_placement(mobility_, mobility_rng_);
        device.current_wlan_id = placed.next_wlan_id;
        engine_.schedule(placed.dwell_s, EventKind::MobilityMove, device.device_id);
    }
    for (const auto& device : devices_) {
        const auto& profile = config_.profiles[workload::index_of(device.app_id)];
        const double first = workload::next_task_time(0.0, device, profile, workload_rng_);
        if (first < config_.duration_s) {
            engine_.schedule(first, EventKind::TaskArrivalAtOrchestrator, device.device_id);
            ++devices_still_generating_;
        }
    }
}

void EdgeSimulation::set_event_trace(std::ostream* trace) {
    event_trace_ = trace;
    if (!event_trace_) {
        engine_.set_observer(nullptr);
        return;
    }
    *event_trace_ << "fire_time,sequence,kind,payload\n";
    engine_.set_observer([this](const sim::SimEvent& e) {
        char time[32];
        std::snprintf(time, sizeof time, "%.17g", e.fire_time);
        *event_trace_ << time << ',' << e.sequence << ',' << sim::to_string(e.kind) << ','
                      << e.payload << '\n';
    });
}

RunMetrics EdgeSimulation::run() {
    if (ran_) {
        throw std::logic_error("EdgeSimulation::run called twice");
    }
    ran_ = true;
    metrics_.events = engine_.run_until(config_.duration_s);
    orchestrator_.on_episode_end();

    for (const auto& task : tasks_) {
        if (task.is_pending()) {
            metrics_.overall.add(TaskOutcome::Pending);
            metrics_.per_app[workload::index_of(task.app_id)].add(TaskOutcome::Pending);
        }
    }
    metrics_.vm_util_edge_pct = compute_.average_utilization(compute::Tier::Edge, config_.duration_s);
    metrics_.vm_util_cloud_pct =
        compute_.average_utilization(compute::Tier::Cloud, config_.duration_s);
    metrics_.offloads = counters_;
    return metrics_;
}

void EdgeSimulation::dispatch(const sim::SimEvent& event) {
    switch (event.kind) {
    case EventKind::TaskArrivalAtOrchestrator:
        on_arrival(static_cast<std::uint32_t>(event.payload));
        break;
    case EventKind::UploadComplete: on_upload_complete(event.payload); break;
    case EventKind::ProcessingComplete: on_processing_complete(event.payload); break;
    case EventKind::DownloadComplete: on_download_complete(event.payload); break;
    case EventKind::MobilityMove: on_mobility(static_cast<std::uint32_t>(event.payload)); break;
    case EventKind::EpisodeEnd: break;
    }
}

void EdgeSimulation::on_arrival(std::uint32_t device_id) {
    const double now = engine_.now();
    const auto& device = devices_.at(device_id);
    const auto& profile = config_.profiles[workload::index_of(device.app_id)];

    const std::uint64_t task_id = tasks_.size();
    tasks_.push_back(workload::spawn_task(task_id, device, profile, now));
    runtime_.emplace_back();
    metrics_.overall.generated += 1;
    metrics_.per_app[workload::index_of(device.app_id)].generated += 1;

    const double next = workload::next_task_time(now, device, profile, workload_rng_);
    if (next < config_.duration_s) {
        engine_.schedule(next, EventKind::TaskArrivalAtOrchestrator, device_id);
    } else if (--devices_still_generating_ == 0) {
        tasks_.back().is_last = true;
    }

    workload::Task& task = tasks_.back();
    const auto state = orchestration::build_state(task, network_, compute_, counters_, now);
    const auto headroom_vec = orchestration::edge_headroom(task, compute_);
    // vector<bool> is packed, so copy into contiguous storage for the span.
    const auto headroom_flags = std::make_unique<bool[]>(headroom_vec.size());
    std::copy(headroom_vec.begin(), headroom_vec.end(), headroom_flags.get());
    const std::span<const bool> headroom(headroom_flags.get(), headroom_vec.size());
    const orchestration::DecisionContext context{task, state, headroom};
    const auto action = orchestrator_.on_task_arrival(context, counters_);
    task.decided_at = now;
    if (observer_) {
        observer_(task, state, action);
    }

    const std::uint32_t n = compute_.edge_server_count();
    if (action.index > n) {
        throw std::out_of_range("orchestrator returned action " + std::to_string(action.index));
    }
    TaskRuntime& rt = runtime_[task_id];
    if (action.is_cloud(n)) {
        rt.route = network::Route::Cloud;
        rt.host = compute::HostRef::cloud();
    } else {
        rt.route = action.index == task.home_wlan_id ? network::Route::HomeEdge
                                                     : network::Route::OtherEdge;
        rt.host = compute::HostRef::edge(action.index);
    }

    auto transfer = network_.begin_transfer(rt.route, task.home_wlan_id, task.upload_kb, now);
    if (!transfer) {
        finish(task_id, TaskOutcome::FailDeadline);
        return;
    }
    rt.transfer = *transfer;
    engine_.schedule(now + transfer->delay_s, EventKind::UploadComplete, task_id);
}

void EdgeSimulation::on_upload_complete(std::uint64_t task_id) {
    const double now = engine_.now();
    workload::Task& task = tasks_.at(task_id);
    TaskRuntime& rt = runtime_[task_id];
    network_.end_transfer(rt.transfer);
    task.upload_done_at = now;

    rt.vm = compute_.admit(task, rt.host, now);
    if (!rt.vm) {
        finish(task_id, TaskOutcome::FailCapacity);
        return;
    }
    rt.processing_time_s = compute_.processing_time(task, *rt.vm);
    engine_.schedule(now + rt.processing_time_s, EventKind::ProcessingComplete, task_id);
}

void EdgeSimulation::on_processing_complete(std::uint64_t task_id) {
    const double now = engine_.now();
    workload::Task& task = tasks_.at(task_id);
    TaskRuntime& rt = runtime_[task_id];
    compute_.release(*rt.vm, task_id, now);
    task.processing_done_at = now;

    auto transfer = network_.begin_transfer(rt.route, task.home_wlan_id, task.download_kb, now);
    if (!transfer) {
        finish(task_id, TaskOutcome::FailDeadline);
        return;
    }
    rt.transfer = *transfer;
    engine_.schedule(now + transfer->delay_s, EventKind::DownloadComplete, task_id);
}

void EdgeSimulation::on_download_complete(std::uint64_t task_id) {
    const double now = engine_.now();
    workload::Task& task = tasks_.at(task_id);
    TaskRuntime& rt = runtime_[task_id];
    network_.end_transfer(rt.transfer);
    task.download_done_at = now;

    compute::CompletionFacts facts;
    facts.delivered = devices_[task.device_id].current_wlan_id == task.home_wlan_id;
    facts.service_time_s = now - task.created_at;
    facts.deadline_s = task.deadline_s;
    finish(task_id, compute::classify_outcome(facts));
}

void EdgeSimulation::on_mobility(std::uint32_t device_id) {
    auto& device = devices_.at(device_id);
    const auto move = workload::nomadic_move(device.current_wlan_id, mobility_, mobility_rng_);
    device.current_wlan_id = move.next_wlan_id;
    const double next = engine_.now() + move.dwell_s;
    if (next <= config_.duration_s) {
        engine_.schedule(next, EventKind::MobilityMove, device_id);
    }
}

void EdgeSimulation::finish(std::uint64_t task_id, TaskOutcome outcome) {
    workload::Task& task = tasks_.at(task_id);
    task.finish(outcome);
    const bool success = outcome == TaskOutcome::Success;

    auto record = [&](OutcomeCounts& counts) {
        counts.add(outcome);
        if (success) {
            const TaskRuntime& rt = runtime_[task_id];
            counts.service_time_sum += *task.download_done_at - task.created_at;
            if (rt.host.tier == compute::Tier::Edge) {
                counts.processing_edge_sum += rt.processing_time_s;
                ++counts.processing_edge_count;
            } else {
                counts.processing_cloud_sum += rt.processing_time_s;
                ++counts.processing_cloud_count;
            }
        }
    };
    record(metrics_.overall);
    record(metrics_.per_app[workload::index_of(task.app_id)]);
    metrics_.cumulative_reward += success ? 1.0 : -1.0;

    orchestrator_.on_task_finished(task, success);
}

} // namespace deepedge::experiment
