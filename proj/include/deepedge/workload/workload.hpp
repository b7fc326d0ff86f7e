#pragma once

#include "deepedge/sim/rng.hpp"
#include "deepedge/workload/application.hpp"
#include "deepedge/workload/task.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace deepedge::workload {

struct MobileDevice {
    std::uint32_t device_id = 0;
    AppId app_id = AppId::AugmentedReality;
    std::uint32_t current_wlan_id = 0;
    double duty_factor = 1.0;
};

/// Splits device_count across the profiles by largest-remainder
/// apportionment of usage_pct, then shuffles which device ids receive which
/// application. Devices start at WLAN 0; placement is the mobility model's job.
std::vector<MobileDevice> assign_applications(std::size_t device_count,
                                              const std::vector<ApplicationProfile>& profiles,
                                              double duty_factor, sim::RngStream& rng);

/// Per-profile device counts from largest-remainder apportionment (ties go to
/// the earlier profile).
std::vector<std::size_t> apportion(std::size_t device_count,
                                   const std::vector<ApplicationProfile>& profiles);

/// Next arrival of a thinned Poisson process: now + Exp(mean / duty).
double next_task_time(double now, const MobileDevice& device, const ApplicationProfile& profile,
                      sim::RngStream& rng);

struct MobilityParams {
    std::vector<double> attractiveness;
    double base_dwell_s = 60.0;

    /// Mean dwell at a location: base * weight / mean weight.
    double mean_dwell(std::uint32_t location) const;
};

struct Move {
    std::uint32_t next_wlan_id = 0;
    double dwell_s = 0.0;
};

/// Picks the next location among the others in proportion to attractiveness
/// (staying put when no other location has weight) and draws its dwell time.
/// Throws DegenerateAttractiveness if every weight is zero.
Move nomadic_move(std::uint32_t current_wlan_id, const MobilityParams& params, sim::RngStream& rng);

/// Initial placement, proportional to attractiveness over all locations.
Move initial_placement(const MobilityParams& params, sim::RngStream& rng);

Task spawn_task(std::uint64_t task_id, const MobileDevice& device,
                const ApplicationProfile& profile, double now);

} // namespace deepedge::workload
