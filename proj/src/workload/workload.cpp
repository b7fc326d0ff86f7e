#include "deepedge/workload/workload.hpp"

#include "deepedge/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace deepedge::workload {

namespace {

void check_weights(const std::vector<double>& weights) {
    if (weights.empty()) {
        throw DegenerateAttractiveness("no locations");
    }
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw DegenerateAttractiveness("attractiveness weights must be finite and nonnegative");
        }
        total += w;
    }
    if (total <= 0.0) {
        throw DegenerateAttractiveness("all attractiveness weights are zero");
    }
}

// Draws an index proportionally to weights, skipping `excluded`.
std::uint32_t weighted_pick(const std::vector<double>& weights, std::optional<std::uint32_t> excluded,
                            double total, sim::RngStream& rng) {
    const double target = rng.uniform01() * total;
    double running = 0.0;
    std::optional<std::uint32_t> last_positive;
    for (std::uint32_t i = 0; i < weights.size(); ++i) {
        if ((excluded && *excluded == i) || weights[i] <= 0.0) {
            continue;
        }
        running += weights[i];
        last_positive = i;
        if (target < running) {
            return i;
        }
    }
    // Rounding can leave target == total; fall back to the last candidate.
    return *last_positive;
}

} // namespace

std::vector<std::size_t> apportion(std::size_t device_count,
                                   const std::vector<ApplicationProfile>& profiles) {
    validate_profiles(profiles);
    std::vector<std::size_t> counts(profiles.size(), 0);
    std::vector<double> remainders(profiles.size(), 0.0);
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        const double quota = static_cast<double>(device_count) * profiles[i].usage_pct / 100.0;
        counts[i] = static_cast<std::size_t>(std::floor(quota + 1e-9));
        remainders[i] = quota - static_cast<double>(counts[i]);
        assigned += counts[i];
    }
    std::vector<std::size_t> order(profiles.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b] + 1e-12; });
    for (std::size_t k = 0; assigned < device_count; ++k, ++assigned) {
        ++counts[order[k % order.size()]];
    }
    return counts;
}

std::vector<MobileDevice> assign_applications(std::size_t device_count,
                                              const std::vector<ApplicationProfile>& profiles,
                                              double duty_factor, sim::RngStream& rng) {
    const auto counts = apportion(device_count, profiles);
    std::vector<AppId> apps;
    apps.reserve(device_count);
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        apps.insert(apps.end(), counts[i], profiles[i].app_id);
    }
    for (std::size_t i = apps.size(); i > 1; --i) {
        std::swap(apps[i - 1], apps[rng.uniform_index(i)]);
    }
    std::vector<MobileDevice> devices(device_count);
    for (std::size_t i = 0; i < device_count; ++i) {
        devices[i] = MobileDevice{static_cast<std::uint32_t>(i), apps[i], 0, duty_factor};
    }
    return devices;
}

double next_task_time(double now, const MobileDevice& device, const ApplicationProfile& profile,
                      sim::RngStream& rng) {
    return now + rng.exponential(profile.mean_interarrival_s / device.duty_factor);
}

double MobilityParams::mean_dwell(std::uint32_t location) const {
    const double mean_weight =
        std::accumulate(attractiveness.begin(), attractiveness.end(), 0.0) /
        static_cast<double>(attractiveness.size());
    return base_dwell_s * attractiveness.at(location) / mean_weight;
}

Move nomadic_move(std::uint32_t current_wlan_id, const MobilityParams& params, sim::RngStream& rng) {
    check_weights(params.attractiveness);
    const auto& weights = params.attractiveness;
    double others = 0.0;
    for (std::uint32_t i = 0; i < weights.size(); ++i) {
        if (i != current_wlan_id) {
            others += weights[i];
        }
    }
    std::uint32_t next = current_wlan_id;
    if (others > 0.0) {
        next = weighted_pick(weights, current_wlan_id, others, rng);
    }
    return Move{next, rng.exponential(params.mean_dwell(next))};
}

Move initial_placement(const MobilityParams& params, sim::RngStream& rng) {
    check_weights(params.attractiveness);
    const double total =
        std::accumulate(params.attractiveness.begin(), params.attractiveness.end(), 0.0);
    const std::uint32_t location = weighted_pick(params.attractiveness, std::nullopt, total, rng);
    return Move{location, rng.exponential(params.mean_dwell(location))};
}

Task spawn_task(std::uint64_t task_id, const MobileDevice& device,
                const ApplicationProfile& profile, double now) {
    Task task;
    task.task_id = task_id;
    task.app_id = device.app_id;
    task.device_id = device.device_id;
    task.home_wlan_id = device.current_wlan_id;
    task.created_at = now;
    task.upload_kb = profile.upload_kb;
    task.download_kb = profile.download_kb;
    task.required_capacity_edge_pct = profile.vm_util_edge_pct;
    task.required_capacity_cloud_pct = profile.vm_util_cloud_pct;
    task.delay_sensitivity = profile.delay_sensitivity;
    task.task_length_gi = profile.task_length_gi;
    task.deadline_s = profile.deadline_s;
    return task;
}

} // namespace deepedge::workload
