#include "deepedge/network/network_model.hpp"

#include "deepedge/error.hpp"

#include <algorithm>
#include <cassert>

namespace deepedge::network {

BandwidthTable::BandwidthTable(std::vector<double> per_client_mbps)
    : per_client_mbps_(std::move(per_client_mbps)) {
    if (per_client_mbps_.empty()) {
        throw InvalidConfig("bandwidth table is empty");
    }
    for (std::size_t i = 0; i < per_client_mbps_.size(); ++i) {
        if (!(per_client_mbps_[i] > 0.0)) {
            throw InvalidConfig("bandwidth table entries must be positive");
        }
        if (i > 0 && per_client_mbps_[i] > per_client_mbps_[i - 1]) {
            throw InvalidConfig("bandwidth table must be nonincreasing in client count");
        }
    }
}

BandwidthTable BandwidthTable::linear(double nominal_mbps, std::size_t saturation_clients) {
    std::vector<double> values(saturation_clients);
    const auto s = static_cast<double>(saturation_clients);
    for (std::size_t c = 1; c <= saturation_clients; ++c) {
        values[c - 1] = nominal_mbps * (s - static_cast<double>(c) + 1.0) / s;
    }
    return BandwidthTable(std::move(values));
}

std::optional<double> BandwidthTable::effective_mbps(std::size_t clients) const {
    if (clients == 0) {
        clients = 1;
    }
    if (clients > per_client_mbps_.size()) {
        return std::nullopt;
    }
    return per_client_mbps_[clients - 1];
}

double NetworkParams::man_service_rate() const {
    return man_bandwidth_mbps * 1024.0 / (8.0 * man_mean_transfer_kb);
}

double transmission_seconds(double size_kb, double mbps) {
    return size_kb * 8.0 / (1024.0 * mbps);
}

std::optional<double> mm1_delay(double service_rate, double arrival_rate, double propagation_s) {
    if (arrival_rate >= service_rate) {
        return std::nullopt;
    }
    return 1.0 / (service_rate - arrival_rate) + propagation_s;
}

NetworkModel::NetworkModel(NetworkParams params, std::uint32_t location_count)
    : params_(std::move(params)),
      wlan_active_(location_count, 0),
      wan_active_(location_count, 0),
      wan_consumed_mbps_(location_count, 0.0) {
    if (location_count == 0) {
        throw InvalidConfig("network needs at least one location");
    }
}

std::optional<double> NetworkModel::man_delay(double arrival_rate) const {
    return mm1_delay(params_.man_service_rate(), arrival_rate, params_.man_propagation_s);
}

double NetworkModel::man_arrival_rate(double now) const {
    const double cutoff = now - params_.man_window_s;
    const auto first = std::upper_bound(man_starts_.begin(), man_starts_.end(), cutoff);
    const auto in_window = static_cast<double>(std::distance(first, man_starts_.end()));
    return in_window / params_.man_window_s;
}

std::optional<double> NetworkModel::current_man_delay(double now) const {
    return man_delay(man_arrival_rate(now));
}

std::optional<double> NetworkModel::transfer_delay(Scope scope, std::uint32_t wlan_id,
                                                   double size_kb) const {
    switch (scope) {
    case Scope::Wlan: {
        const auto bw = params_.wlan.effective_mbps(wlan_active_.at(wlan_id) + 1);
        if (!bw) {
            return std::nullopt;
        }
        return transmission_seconds(size_kb, *bw) + params_.wlan_propagation_s;
    }
    case Scope::Wan: {
        const auto bw = params_.wan.effective_mbps(wan_active_.at(wlan_id) + 1);
        if (!bw) {
            return std::nullopt;
        }
        return transmission_seconds(size_kb, *bw) + params_.wan_propagation_s;
    }
    case Scope::Man:
        // Transmission is folded into the queue's service rate.
        return std::nullopt;
    }
    return std::nullopt;
}

std::optional<Transfer> NetworkModel::begin_transfer(Route route, std::uint32_t wlan_id,
                                                     double size_kb, double now) {
    auto wlan = transfer_delay(Scope::Wlan, wlan_id, size_kb);
    if (!wlan) {
        return std::nullopt;
    }
    Transfer transfer{wlan_id, route, *wlan, 0.0, true};
    if (route == Route::OtherEdge) {
        const auto man = current_man_delay(now);
        if (!man) {
            return std::nullopt;
        }
        transfer.delay_s += *man;
        man_starts_.push_back(now);
        while (!man_starts_.empty() && man_starts_.front() < now - params_.man_window_s) {
            man_starts_.pop_front();
        }
        ++man_active_;
    } else if (route == Route::Cloud) {
        const auto wan = transfer_delay(Scope::Wan, wlan_id, size_kb);
        if (!wan) {
            return std::nullopt;
        }
        transfer.delay_s += *wan;
        transfer.wan_mbps = *params_.wan.effective_mbps(wan_active_[wlan_id] + 1);
        ++wan_active_[wlan_id];
        wan_consumed_mbps_[wlan_id] += transfer.wan_mbps;
    }
    ++wlan_active_[wlan_id];
    return transfer;
}

void NetworkModel::end_transfer(Transfer& transfer) {
    assert(transfer.active);
    transfer.active = false;
    --wlan_active_.at(transfer.wlan_id);
    if (transfer.route == Route::OtherEdge) {
        --man_active_;
    } else if (transfer.route == Route::Cloud) {
        --wan_active_[transfer.wlan_id];
        wan_consumed_mbps_[transfer.wlan_id] -= transfer.wan_mbps;
        if (wan_active_[transfer.wlan_id] == 0) {
            // Drop accumulated rounding once the link is idle.
            wan_consumed_mbps_[transfer.wlan_id] = 0.0;
        }
    }
}

double NetworkModel::remaining_wan_bandwidth(std::uint32_t wlan_id) const {
    return std::max(0.0, params_.wan_nominal_mbps - wan_consumed_mbps_.at(wlan_id));
}

} // namespace deepedge::network
