#include "deepedge/experiment/config.hpp"

#include "deepedge/error.hpp"

#include <fstream>
#include <initializer_list>
#include <numeric>
#include <set>

namespace deepedge::experiment {

using nlohmann::json;
using nlohmann::ordered_json;

network::BandwidthTable LinkTableSpec::build() const {
    if (!per_client_mbps.empty()) {
        return network::BandwidthTable(per_client_mbps);
    }
    if (!(nominal_mbps > 0.0) || saturation_clients == 0) {
        throw InvalidConfig("link table needs a positive nominal bandwidth and saturation count");
    }
    return network::BandwidthTable::linear(nominal_mbps, saturation_clients);
}

void ScenarioConfig::validate() const {
    if (compute.edge_server_count == 0 || compute.vms_per_edge == 0 || compute.cloud_vms == 0) {
        throw InvalidConfig("server and VM counts must be positive");
    }
    if (!(compute.edge_vm_gips > 0.0) || !(compute.cloud_vm_gips > 0.0)) {
        throw InvalidConfig("VM capacities must be positive");
    }
    if (device_counts.empty()) {
        throw InvalidConfig("device_counts must not be empty");
    }
    for (auto count : device_counts) {
        if (count == 0) {
            throw InvalidConfig("device counts must be positive");
        }
    }
    if (!(duration_s > 0.0)) {
        throw InvalidConfig("duration_s must be positive");
    }
    if (seeds.empty() && repetitions == 0) {
        throw InvalidConfig("need at least one repetition or an explicit seed list");
    }
    if (!(duty_factor > 0.0) || duty_factor > 1.0) {
        throw InvalidConfig("duty_factor must lie in (0, 1]");
    }
    if (!(base_dwell_s > 0.0)) {
        throw InvalidConfig("base_dwell_s must be positive");
    }
    if (!attractiveness.empty() && attractiveness.size() != compute.edge_server_count) {
        throw InvalidConfig("attractiveness needs one weight per edge server");
    }
    for (double w : attractiveness) {
        if (w < 0.0) {
            throw InvalidConfig("attractiveness weights must be nonnegative");
        }
    }
    if (!attractiveness.empty() &&
        std::accumulate(attractiveness.begin(), attractiveness.end(), 0.0) <= 0.0) {
        throw DegenerateAttractiveness("every attractiveness weight is zero");
    }
    if (!(deadline_rule.base_deadline_s > 0.0) || !(deadline_rule.min_sensitivity > 0.0)) {
        throw InvalidConfig("deadline rule parameters must be positive");
    }
    workload::validate_profiles(profiles);
    wlan.build();
    wan.build();
    if (!(man_bandwidth_mbps > 0.0) || !(man_mean_transfer_kb > 0.0) || man_propagation_s < 0.0 ||
        !(man_window_s > 0.0)) {
        throw InvalidConfig("MAN parameters out of range");
    }
    if (orchestrators.empty()) {
        throw InvalidConfig("orchestrators must not be empty");
    }
    for (const auto& name : orchestrators) {
        bool known = name == "deepedge";
        for (auto baseline : orchestration::kBaselineNames) {
            known = known || name == baseline;
        }
        if (!known) {
            throw InvalidConfig("unknown orchestrator '" + name + "'");
        }
    }
    agent.validate();
    if (training.device_count == 0) {
        throw InvalidConfig("training device_count must be positive");
    }
}

std::vector<std::uint64_t> ScenarioConfig::seed_list() const {
    if (!seeds.empty()) {
        return seeds;
    }
    std::vector<std::uint64_t> out(repetitions);
    std::iota(out.begin(), out.end(), std::uint64_t{1});
    return out;
}

network::NetworkParams ScenarioConfig::network_params() const {
    network::NetworkParams p;
    p.wlan = wlan.build();
    p.wan = wan.build();
    p.wan_nominal_mbps = p.wan.values().front();
    p.man_bandwidth_mbps = man_bandwidth_mbps;
    p.man_mean_transfer_kb = man_mean_transfer_kb;
    p.man_propagation_s = man_propagation_s;
    p.man_window_s = man_window_s;
    return p;
}

workload::MobilityParams ScenarioConfig::mobility_params() const {
    workload::MobilityParams p;
    p.attractiveness = attractiveness.empty()
                           ? std::vector<double>(compute.edge_server_count, 1.0)
                           : attractiveness;
    p.base_dwell_s = base_dwell_s;
    return p;
}

ScenarioConfig paper_defaults() {
    ScenarioConfig c;
    for (std::size_t n = 200; n <= 2400; n += 200) {
        c.device_counts.push_back(n);
    }
    c.profiles = workload::default_profiles(c.deadline_rule);
    return c;
}

ScenarioConfig desk_preset() {
    ScenarioConfig c = paper_defaults();
    c.compute.edge_server_count = 3;
    c.device_counts = {30, 60, 90, 120};
    c.repetitions = 5;
    c.training.episodes = 20;
    c.training.device_count = 120;
    return c;
}

double expected_task_count(const ScenarioConfig& config, std::size_t device_count) {
    const auto split = workload::apportion(device_count, config.profiles);
    double total = 0.0;
    for (std::size_t i = 0; i < split.size(); ++i) {
        total += static_cast<double>(split[i]) * config.duration_s * config.duty_factor /
                 config.profiles[i].mean_interarrival_s;
    }
    return total;
}

agent::Normalizer make_normalizer(const ScenarioConfig& config, std::size_t device_count) {
    agent::Normalizer n;
    n.wan_bandwidth_max = config.network_params().wan_nominal_mbps;
    n.edge_server_count = config.compute.edge_server_count;
    n.expected_task_total = std::max(1.0, expected_task_count(config, device_count));
    return n;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

void reject_unknown(const json& obj, std::string_view where,
                    std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) {
        throw InvalidConfig(std::string(where) + " must be an object");
    }
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (auto a : allowed) {
            ok = ok || key == a;
        }
        if (!ok) {
            throw InvalidConfig("unknown key '" + key + "' in " + std::string(where));
        }
    }
}

template <typename T>
void read(const json& obj, const char* key, T& target) {
    if (auto it = obj.find(key); it != obj.end()) {
        try {
            target = it->get<T>();
        } catch (const json::exception& e) {
            throw InvalidConfig(std::string("bad value for '") + key + "': " + e.what());
        }
    }
}

ordered_json link_to_json(const LinkTableSpec& spec) {
    ordered_json j;
    if (!spec.per_client_mbps.empty()) {
        j["per_client_mbps"] = spec.per_client_mbps;
    } else {
        j["nominal_mbps"] = spec.nominal_mbps;
        j["saturation_clients"] = spec.saturation_clients;
    }
    return j;
}

LinkTableSpec link_from_json(const json& j, LinkTableSpec spec, std::string_view where) {
    reject_unknown(j, where, {"nominal_mbps", "saturation_clients", "per_client_mbps"});
    read(j, "nominal_mbps", spec.nominal_mbps);
    read(j, "saturation_clients", spec.saturation_clients);
    read(j, "per_client_mbps", spec.per_client_mbps);
    return spec;
}

} // namespace

ordered_json to_json(const ScenarioConfig& c) {
    ordered_json doc;
    doc["infrastructure"] = {
        {"edge_server_count", c.compute.edge_server_count},
        {"vms_per_edge", c.compute.vms_per_edge},
        {"edge_vm_gips", c.compute.edge_vm_gips},
        {"cloud_vms", c.compute.cloud_vms},
        {"cloud_vm_gips", c.compute.cloud_vm_gips},
    };
    doc["scenario"] = {
        {"device_counts", c.device_counts},
        {"duration_s", c.duration_s},
        {"repetitions", c.repetitions},
        {"seeds", c.seeds},
        {"duty_factor", c.duty_factor},
    };
    doc["deadline"] = {
        {"base_deadline_s", c.deadline_rule.base_deadline_s},
        {"min_sensitivity", c.deadline_rule.min_sensitivity},
    };
    ordered_json apps = ordered_json::array();
    for (const auto& p : c.profiles) {
        ordered_json a;
        a["name"] = workload::to_string(p.app_id);
        a["mean_interarrival_s"] = p.mean_interarrival_s;
        a["delay_sensitivity"] = p.delay_sensitivity;
        a["upload_kb"] = p.upload_kb;
        a["download_kb"] = p.download_kb;
        a["vm_util_edge_pct"] = p.vm_util_edge_pct;
        a["vm_util_cloud_pct"] = p.vm_util_cloud_pct;
        a["usage_pct"] = p.usage_pct;
        a["task_length_gi"] = p.task_length_gi;
        if (p.deadline_s != c.deadline_rule.deadline_for(p.delay_sensitivity)) {
            a["deadline_s"] = p.deadline_s;
        }
        apps.push_back(std::move(a));
    }
    doc["applications"] = std::move(apps);
    doc["mobility"] = {
        {"attractiveness", c.attractiveness},
        {"base_dwell_s", c.base_dwell_s},
    };
    doc["network"] = {
        {"wlan", link_to_json(c.wlan)},
        {"wan", link_to_json(c.wan)},
        {"man",
         {
             {"bandwidth_mbps", c.man_bandwidth_mbps},
             {"mean_transfer_kb", c.man_mean_transfer_kb},
             {"propagation_s", c.man_propagation_s},
             {"window_s", c.man_window_s},
         }},
    };
    doc["thresholds"] = {
        {"wan_bandwidth_mbps", c.thresholds.wan_bandwidth_mbps},
        {"edge_utilization_pct", c.thresholds.edge_utilization_pct},
    };
    doc["orchestrators"] = c.orchestrators;
    ordered_json agent;
    agent["learning_rate"] = c.agent.learning_rate;
    agent["discount"] = c.agent.discount;
    agent["epsilon_initial"] = c.agent.epsilon_initial;
    agent["epsilon_decay"] = c.agent.epsilon_decay;
    agent["epsilon_floor"] = c.agent.epsilon_floor;
    agent["replay_capacity"] = c.agent.replay_capacity;
    agent["minibatch_size"] = c.agent.minibatch_size;
    agent["target_sync_period"] = c.agent.target_sync_period;
    agent["hidden_layers"] = c.agent.hidden_layers;
    agent["gradient_clip"] = c.agent.gradient_clip ? ordered_json(*c.agent.gradient_clip)
                                                   : ordered_json(nullptr);
    agent["average_minibatch"] = c.agent.average_minibatch;
    doc["agent"] = std::move(agent);
    doc["training"] = {
        {"episodes", c.training.episodes},
        {"device_count", c.training.device_count},
        {"seed", c.training.seed},
    };
    return doc;
}

ScenarioConfig config_from_json(const json& doc) {
    ScenarioConfig c = paper_defaults();
    reject_unknown(doc, "config",
                   {"infrastructure", "scenario", "deadline", "applications", "mobility", "network",
                    "thresholds", "orchestrators", "agent", "training"});

    if (auto it = doc.find("infrastructure"); it != doc.end()) {
        const auto& j = *it;
        reject_unknown(j, "infrastructure",
                       {"edge_server_count", "vms_per_edge", "edge_vm_gips", "cloud_vms",
                        "cloud_vm_gips"});
        read(j, "edge_server_count", c.compute.edge_server_count);
        read(j, "vms_per_edge", c.compute.vms_per_edge);
        read(j, "edge_vm_gips", c.compute.edge_vm_gips);
        read(j, "cloud_vms", c.compute.cloud_vms);
        read(j, "cloud_vm_gips", c.compute.cloud_vm_gips);
    }
    if (auto it = doc.find("scenario"); it != doc.end()) {
        const auto& j = *it;
        reject_unknown(j, "scenario",
                       {"device_counts", "duration_s", "repetitions", "seeds", "duty_factor"});
        read(j, "device_counts", c.device_counts);
        read(j, "duration_s", c.duration_s);
        read(j, "repetitions", c.repetitions);
        read(j, "seeds", c.seeds);
        read(j, "duty_factor", c.duty_factor);
    }
    if (auto it = doc.find("deadline"); it != doc.end()) {
        reject_unknown(*it, "deadline", {"base_deadline_s", "min_sensitivity"});
        read(*it, "base_deadline_s", c.deadline_rule.base_deadline_s);
        read(*it, "min_sensitivity", c.deadline_rule.min_sensitivity);
    }
    if (auto it = doc.find("applications"); it != doc.end()) {
        if (!it->is_array()) {
            throw InvalidConfig("applications must be an array");
        }
        c.profiles.clear();
        for (const auto& a : *it) {
            reject_unknown(a, "application",
                           {"name", "mean_interarrival_s", "delay_sensitivity", "upload_kb",
                            "download_kb", "vm_util_edge_pct", "vm_util_cloud_pct", "usage_pct",
                            "task_length_gi", "deadline_s"});
            std::string name;
            read(a, "name", name);
            const auto app = workload::app_from_string(name);
            if (!app) {
                throw InvalidConfig("unknown application '" + name + "'");
            }
            workload::ApplicationProfile p;
            p.app_id = *app;
            read(a, "mean_interarrival_s", p.mean_interarrival_s);
            read(a, "delay_sensitivity", p.delay_sensitivity);
            read(a, "upload_kb", p.upload_kb);
            read(a, "download_kb", p.download_kb);
            read(a, "vm_util_edge_pct", p.vm_util_edge_pct);
            read(a, "vm_util_cloud_pct", p.vm_util_cloud_pct);
            read(a, "usage_pct", p.usage_pct);
            read(a, "task_length_gi", p.task_length_gi);
            p.deadline_s = c.deadline_rule.deadline_for(p.delay_sensitivity);
            read(a, "deadline_s", p.deadline_s);
            c.profiles.push_back(p);
        }
    } else {
        c.profiles = workload::default_profiles(c.deadline_rule);
    }
    if (auto it = doc.find("mobility"); it != doc.end()) {
        reject_unknown(*it, "mobility", {"attractiveness", "base_dwell_s"});
        read(*it, "attractiveness", c.attractiveness);
        read(*it, "base_dwell_s", c.base_dwell_s);
    }
    if (auto it = doc.find("network"); it != doc.end()) {
        const auto& j = *it;
        reject_unknown(j, "network", {"wlan", "wan", "man"});
        if (auto w = j.find("wlan"); w != j.end()) {
            c.wlan = link_from_json(*w, c.wlan, "network.wlan");
        }
        if (auto w = j.find("wan"); w != j.end()) {
            c.wan = link_from_json(*w, c.wan, "network.wan");
        }
        if (auto m = j.find("man"); m != j.end()) {
            reject_unknown(*m, "network.man",
                           {"bandwidth_mbps", "mean_transfer_kb", "propagation_s", "window_s"});
            read(*m, "bandwidth_mbps", c.man_bandwidth_mbps);
            read(*m, "mean_transfer_kb", c.man_mean_transfer_kb);
            read(*m, "propagation_s", c.man_propagation_s);
            read(*m, "window_s", c.man_window_s);
        }
    }
    if (auto it = doc.find("thresholds"); it != doc.end()) {
        reject_unknown(*it, "thresholds", {"wan_bandwidth_mbps", "edge_utilization_pct"});
        read(*it, "wan_bandwidth_mbps", c.thresholds.wan_bandwidth_mbps);
        read(*it, "edge_utilization_pct", c.thresholds.edge_utilization_pct);
    }
    read(doc, "orchestrators", c.orchestrators);
    if (auto it = doc.find("agent"); it != doc.end()) {
        const auto& j = *it;
        reject_unknown(j, "agent",
                       {"learning_rate", "discount", "epsilon_initial", "epsilon_decay",
                        "epsilon_floor", "replay_capacity", "minibatch_size", "target_sync_period",
                        "hidden_layers", "gradient_clip", "average_minibatch"});
        read(j, "learning_rate", c.agent.learning_rate);
        read(j, "discount", c.agent.discount);
        read(j, "epsilon_initial", c.agent.epsilon_initial);
        read(j, "epsilon_decay", c.agent.epsilon_decay);
        read(j, "epsilon_floor", c.agent.epsilon_floor);
        read(j, "replay_capacity", c.agent.replay_capacity);
        read(j, "minibatch_size", c.agent.minibatch_size);
        read(j, "target_sync_period", c.agent.target_sync_period);
        read(j, "hidden_layers", c.agent.hidden_layers);
        if (auto g = j.find("gradient_clip"); g != j.end()) {
            c.agent.gradient_clip =
                g->is_null() ? std::nullopt : std::optional<double>(g->get<double>());
        }
        read(j, "average_minibatch", c.agent.average_minibatch);
    }
    if (auto it = doc.find("training"); it != doc.end()) {
        reject_unknown(*it, "training", {"episodes", "device_count", "seed"});
        read(*it, "episodes", c.training.episodes);
        read(*it, "device_count", c.training.device_count);
        read(*it, "seed", c.training.seed);
    }
    return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidConfig("cannot open config " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw InvalidConfig("config " + path.string() + " is not valid JSON: " + e.what());
    }
    ScenarioConfig config = config_from_json(doc);
    config.validate();
    return config;
}

void save_config(const ScenarioConfig& config, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw InvalidConfig("cannot write config " + path.string());
    }
    out << to_json(config).dump(2) << '\n';
}

} // namespace deepedge::experiment
