#include "deepedge/workload/application.hpp"

#include "deepedge/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace deepedge::workload {

std::string_view to_string(AppId app) {
    switch (app) {
    case AppId::AugmentedReality: return "augmented_reality";
    case AppId::PervasiveHealth: return "pervasive_health";
    case AppId::ImageRendering: return "image_rendering";
    case AppId::Infotainment: return "infotainment";
    }
    return "unknown";
}

std::optional<AppId> app_from_string(std::string_view name) {
    for (AppId app : kAllApps) {
        if (to_string(app) == name) {
            return app;
        }
    }
    return std::nullopt;
}

double DeadlineRule::deadline_for(double delay_sensitivity) const {
    return base_deadline_s / std::max(delay_sensitivity, min_sensitivity);
}

std::vector<ApplicationProfile> default_profiles(const DeadlineRule& rule) {
    // interarrival, sensitivity, upload, download, edge %, cloud %, usage %, length
    std::vector<ApplicationProfile> profiles = {
        {AppId::AugmentedReality, 2.0, 0.9, 1500.0, 25.0, 6.0, 0.6, 30.0, 2.0, 0.0},
        {AppId::PervasiveHealth, 3.0, 0.7, 20.0, 1250.0, 2.0, 0.2, 20.0, 0.5, 0.0},
        {AppId::ImageRendering, 20.0, 0.1, 2500.0, 200.0, 30.0, 3.0, 20.0, 45.0, 0.0},
        {AppId::Infotainment, 7.0, 0.3, 25.0, 1000.0, 10.0, 1.0, 30.0, 10.0, 0.0},
    };
    for (auto& profile : profiles) {
        profile.deadline_s = rule.deadline_for(profile.delay_sensitivity);
    }
    return profiles;
}

void validate_profiles(const std::vector<ApplicationProfile>& profiles) {
    if (profiles.empty()) {
        throw InvalidProfileSet("no application profiles");
    }
    std::array<bool, kAppCount> seen{};
    double usage_total = 0.0;
    for (const auto& p : profiles) {
        const std::string name(to_string(p.app_id));
        if (seen[index_of(p.app_id)]) {
            throw InvalidProfileSet("duplicate profile for " + name);
        }
        seen[index_of(p.app_id)] = true;
        if (p.delay_sensitivity < 0.0 || p.delay_sensitivity > 1.0) {
            throw InvalidProfileSet(name + ": delay sensitivity outside [0,1]");
        }
        if (!(p.vm_util_edge_pct > 0.0 && p.vm_util_edge_pct <= 100.0) ||
            !(p.vm_util_cloud_pct > 0.0 && p.vm_util_cloud_pct <= 100.0)) {
            throw InvalidProfileSet(name + ": VM utilization outside (0,100]");
        }
        if (!(p.upload_kb > 0.0 && p.download_kb > 0.0 && p.task_length_gi > 0.0 &&
              p.mean_interarrival_s > 0.0 && p.deadline_s > 0.0)) {
            throw InvalidProfileSet(name + ": sizes, lengths and times must be positive");
        }
        if (p.usage_pct < 0.0) {
            throw InvalidProfileSet(name + ": negative usage percentage");
        }
        usage_total += p.usage_pct;
    }
    if (std::abs(usage_total - 100.0) > 1e-9) {
        throw InvalidProfileSet("usage percentages sum to " + std::to_string(usage_total) +
                                ", expected 100");
    }
}

} // namespace deepedge::workload
