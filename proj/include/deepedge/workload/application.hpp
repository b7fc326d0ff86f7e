#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

namespace deepedge::workload {

enum class AppId : std::uint8_t {
    AugmentedReality,
    PervasiveHealth,
    ImageRendering,
    Infotainment,
};

inline constexpr std::size_t kAppCount = 4;
inline constexpr std::array<AppId, kAppCount> kAllApps = {
    AppId::AugmentedReality, AppId::PervasiveHealth, AppId::ImageRendering, AppId::Infotainment};

std::string_view to_string(AppId app);
/// Accepts the snake_case names produced by to_string.
std::optional<AppId> app_from_string(std::string_view name);

inline std::size_t index_of(AppId app) { return static_cast<std::size_t>(app); }

struct ApplicationProfile {
    AppId app_id = AppId::AugmentedReality;
    double mean_interarrival_s = 1.0;
    double delay_sensitivity = 0.0;
    double upload_kb = 0.0;
    double download_kb = 0.0;
    double vm_util_edge_pct = 0.0;
    double vm_util_cloud_pct = 0.0;
    double usage_pct = 0.0;
    double task_length_gi = 0.0;
    double deadline_s = 0.0;
};

struct DeadlineRule {
    double base_deadline_s = 4.0;
    double min_sensitivity = 0.05;

    /// base / max(sensitivity, min_sensitivity)
    double deadline_for(double delay_sensitivity) const;
};

/// The four applications with their default properties; deadlines follow
/// the given rule.
std::vector<ApplicationProfile> default_profiles(const DeadlineRule& rule = {});

/// Throws InvalidProfileSet when the set is not one profile per app or a
/// profile breaks its range invariants.
void validate_profiles(const std::vector<ApplicationProfile>& profiles);

} // namespace deepedge::workload
