#pragma once

#include "deepedge/agent/ddqn_agent.hpp"
#include "deepedge/compute/compute_model.hpp"
#include "deepedge/network/network_model.hpp"
#include "deepedge/orchestration/orchestrator.hpp"
#include "deepedge/workload/workload.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace deepedge::experiment {

/// A per-client bandwidth table, either spelled out or generated linearly.
struct LinkTableSpec {
    double nominal_mbps = 100.0;
    std::size_t saturation_clients = 50;
    std::vector<double> per_client_mbps;  // overrides the linear form when nonempty

    network::BandwidthTable build() const;
};

struct TrainingSettings {
    std::size_t episodes = 101;
    std::size_t device_count = 2400;
    // Kept apart from the evaluation seeds so evaluation runs on unseen traces.
    std::uint64_t seed = 1000;
};

struct ScenarioConfig {
    compute::ComputeParams compute;
    std::vector<std::size_t> device_counts;
    double duration_s = 300.0;
    std::size_t repetitions = 40;
    // Explicit seed list; when empty, seeds are 1..repetitions.
    std::vector<std::uint64_t> seeds;

    workload::DeadlineRule deadline_rule;
    std::vector<workload::ApplicationProfile> profiles;
    double duty_factor = 0.4;
    // One weight per edge location; empty means uniform.
    std::vector<double> attractiveness;
    double base_dwell_s = 60.0;

    LinkTableSpec wlan{100.0, 50, {}};
    LinkTableSpec wan{20.0, 20, {}};
    double man_bandwidth_mbps = 100.0;
    double man_mean_transfer_kb = 1280.0;
    double man_propagation_s = 0.005;
    double man_window_s = 10.0;

    orchestration::BaselineThresholds thresholds;
    std::vector<std::string> orchestrators = {"deepedge", "network", "utilization", "hybrid",
                                              "random"};
    agent::AgentConfig agent;
    TrainingSettings training;

    /// Throws InvalidConfig (or InvalidProfileSet) on the first violation.
    void validate() const;

    std::vector<std::uint64_t> seed_list() const;
    network::NetworkParams network_params() const;
    workload::MobilityParams mobility_params() const;
};

/// All defaults at full scale: 14 edge servers, 200..2400 devices, 40 seeds.
ScenarioConfig paper_defaults();

/// Desk scale: 3 edge servers, 30..120 devices, 5 seeds, 20 training episodes.
ScenarioConfig desk_preset();

/// Expected number of tasks generated over the run for `device_count` devices.
double expected_task_count(const ScenarioConfig& config, std::size_t device_count);

/// Feature scaling for the agent, sized to the scenario.
agent::Normalizer make_normalizer(const ScenarioConfig& config, std::size_t device_count);

nlohmann::ordered_json to_json(const ScenarioConfig& config);
/// Missing keys keep the full-scale defaults; unknown keys are rejected.
ScenarioConfig config_from_json(const nlohmann::json& doc);

ScenarioConfig load_config(const std::filesystem::path& path);
void save_config(const ScenarioConfig& config, const std::filesystem::path& path);

} // namespace deepedge::experiment
