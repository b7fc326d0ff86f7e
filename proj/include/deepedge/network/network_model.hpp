#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string_view>
#include <vector>

namespace deepedge::network {

/// Effective per-client bandwidth (Mbps) indexed by concurrent client count.
/// Counts beyond the table are saturated.
class BandwidthTable {
public:
    BandwidthTable() = default;
    /// per_client_mbps[c - 1] is the bandwidth each of c clients gets.
    /// Throws InvalidConfig unless the table is positive and nonincreasing.
    explicit BandwidthTable(std::vector<double> per_client_mbps);

    /// nominal * (S - c + 1) / S for c in [1, S].
    static BandwidthTable linear(double nominal_mbps, std::size_t saturation_clients);

    std::optional<double> effective_mbps(std::size_t clients) const;
    std::size_t saturation_clients() const { return per_client_mbps_.size(); }
    const std::vector<double>& values() const { return per_client_mbps_; }

private:
    std::vector<double> per_client_mbps_;
};

enum class Scope : std::uint8_t { Wlan, Man, Wan };

/// Which links a transfer crosses between the device and the serving host.
enum class Route : std::uint8_t {
    HomeEdge,   // WLAN only
    OtherEdge,  // WLAN + MAN
    Cloud,      // WLAN + WAN
};

struct NetworkParams {
    BandwidthTable wlan = BandwidthTable::linear(100.0, 50);
    BandwidthTable wan = BandwidthTable::linear(20.0, 20);
    double wlan_propagation_s = 0.0;
    double wan_propagation_s = 0.0;
    double wan_nominal_mbps = 20.0;
    double man_bandwidth_mbps = 100.0;
    double man_mean_transfer_kb = 1280.0;
    double man_propagation_s = 0.005;
    double man_window_s = 10.0;

    /// Service rate of the MAN queue in transfers per second.
    double man_service_rate() const;
};

/// Serialization time of size_kb at mbps, with 1 KB = 8/1024 Mb.
double transmission_seconds(double size_kb, double mbps);

/// M/M/1 sojourn time plus propagation; nullopt when arrival_rate >= service_rate.
std::optional<double> mm1_delay(double service_rate, double arrival_rate, double propagation_s);

struct Transfer {
    std::uint32_t wlan_id = 0;
    Route route = Route::HomeEdge;
    double delay_s = 0.0;
    double wan_mbps = 0.0;
    bool active = false;
};

/// Link occupancy and delay model for the WLAN, MAN and WAN tiers.
///
/// Delays are priced once when a transfer starts; transfers already in
/// flight are never re-priced.
class NetworkModel {
public:
    NetworkModel(NetworkParams params, std::uint32_t location_count);

    const NetworkParams& params() const { return params_; }

    /// MAN delay for a given arrival rate; nullopt when saturated.
    std::optional<double> man_delay(double arrival_rate) const;

    /// Windowed estimate of admitted MAN transfers per second at `now`.
    double man_arrival_rate(double now) const;

    /// man_delay(man_arrival_rate(now)).
    std::optional<double> current_man_delay(double now) const;

    /// Delay of a new transfer over one WLAN or WAN link given current
    /// occupancy; nullopt when the table saturates. size 0 gives propagation only.
    std::optional<double> transfer_delay(Scope scope, std::uint32_t wlan_id, double size_kb) const;

    /// Prices and starts a transfer over every link of the route. Counters
    /// change only on success; nullopt means some link was saturated.
    std::optional<Transfer> begin_transfer(Route route, std::uint32_t wlan_id, double size_kb,
                                           double now);

    /// Releases the occupancy taken by begin_transfer.
    void end_transfer(Transfer& transfer);

    double remaining_wan_bandwidth(std::uint32_t wlan_id) const;

    std::size_t active_wlan_transfers(std::uint32_t wlan_id) const { return wlan_active_.at(wlan_id); }
    std::size_t active_wan_transfers(std::uint32_t wlan_id) const { return wan_active_.at(wlan_id); }
    std::size_t active_man_transfers() const { return man_active_; }
    std::uint32_t location_count() const { return static_cast<std::uint32_t>(wlan_active_.size()); }

private:
    NetworkParams params_;
    std::vector<std::size_t> wlan_active_;
    std::vector<std::size_t> wan_active_;
    std::vector<double> wan_consumed_mbps_;
    std::size_t man_active_ = 0;
    std::deque<double> man_starts_;
};

} // namespace deepedge::network
