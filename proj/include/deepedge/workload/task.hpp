#pragma once

#include "deepedge/workload/application.hpp"

#include <cstdint>
#include <optional>
#include <string_view>

namespace deepedge::workload {

enum class TaskOutcome : std::uint8_t {
    Pending,
    Success,
    FailCapacity,
    FailDeadline,
    FailMobility,
};

std::string_view to_string(TaskOutcome outcome);

struct Task {
    std::uint64_t task_id = 0;
    AppId app_id = AppId::AugmentedReality;
    std::uint32_t device_id = 0;
    std::uint32_t home_wlan_id = 0;
    double created_at = 0.0;
    double upload_kb = 0.0;
    double download_kb = 0.0;
    double required_capacity_edge_pct = 0.0;
    double required_capacity_cloud_pct = 0.0;
    double delay_sensitivity = 0.0;
    double task_length_gi = 0.0;
    double deadline_s = 0.0;
    // Set when the generator knows no later task exists in the episode.
    bool is_last = false;

    std::optional<double> decided_at;
    std::optional<double> upload_done_at;
    std::optional<double> processing_done_at;
    std::optional<double> download_done_at;

    /// Writes the terminal outcome; throws std::logic_error if already set.
    void finish(TaskOutcome result);
    TaskOutcome outcome() const { return outcome_; }
    bool is_pending() const { return outcome_ == TaskOutcome::Pending; }

private:
    TaskOutcome outcome_ = TaskOutcome::Pending;
};

} // namespace deepedge::workload
