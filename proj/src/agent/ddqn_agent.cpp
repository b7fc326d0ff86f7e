#include "deepedge/agent/ddqn_agent.hpp"

#include "deepedge/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>

namespace deepedge::agent {

using orchestration::Feature;

void AgentConfig::validate() const {
    if (discount < 0.0 || discount > 1.0) {
        throw InvalidConfig("discount must lie in [0,1]");
    }
    if (!(learning_rate > 0.0)) {
        throw InvalidConfig("learning rate must be positive");
    }
    if (minibatch_size == 0) {
        throw InvalidConfig("minibatch size must be at least 1");
    }
    if (target_sync_period == 0) {
        throw InvalidConfig("target sync period must be at least 1");
    }
    if (replay_capacity == 0) {
        throw InvalidConfig("replay capacity must be positive");
    }
    if (gradient_clip && !(*gradient_clip > 0.0)) {
        throw InvalidConfig("gradient clip must be positive");
    }
    EpsilonSchedule(epsilon_initial, epsilon_decay, epsilon_floor);
}

std::uint32_t argmax(std::span<const double> values) {
    std::uint32_t best = 0;
    for (std::uint32_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[best]) {
            best = i;
        }
    }
    return best;
}

double ddqn_target(const Transition& transition, const nn::DenseNetwork& online,
                   const nn::DenseNetwork& target, double discount) {
    if (transition.is_done) {
        return transition.reward;
    }
    const auto chosen = argmax(online.forward(transition.next_state));
    const auto evaluated = target.forward(transition.next_state);
    return transition.reward + discount * evaluated[chosen];
}

double dqn_target(const Transition& transition, const nn::DenseNetwork& target, double discount) {
    if (transition.is_done) {
        return transition.reward;
    }
    const auto values = target.forward(transition.next_state);
    return transition.reward + discount * values[argmax(values)];
}

std::vector<double> Normalizer::operator()(const orchestration::StateVector& raw) const {
    auto scaled = [](double value, double max) {
        if (max <= 0.0) {
            return 0.0;
        }
        return std::clamp(value / max, 0.0, 1.0);
    };
    std::vector<double> out(raw.size());
    out[Feature::kWanBandwidth] = scaled(raw[Feature::kWanBandwidth], wan_bandwidth_max);
    out[Feature::kManDelay] = scaled(raw[Feature::kManDelay], man_delay_max);
    out[Feature::kTaskReqCapacity] = scaled(raw[Feature::kTaskReqCapacity], task_req_capacity_max);
    out[Feature::kWlanId] =
        edge_server_count > 1 ? scaled(raw[Feature::kWlanId], edge_server_count - 1.0) : 0.0;
    out[Feature::kDelaySensitivity] = scaled(raw[Feature::kDelaySensitivity], delay_sensitivity_max);
    for (auto f : {Feature::kTasksToWlan, Feature::kTasksToMan, Feature::kTasksToWan}) {
        out[f] = scaled(raw[f], expected_task_total);
    }
    out[Feature::kActiveManTasks] = scaled(raw[Feature::kActiveManTasks], active_man_max);
    for (std::size_t i = Feature::kEdgeLoadBase; i < raw.size(); ++i) {
        out[i] = scaled(raw[i], edge_load_max);
    }
    return out;
}

namespace {

nn::DenseNetwork build_network(std::size_t input_width, std::size_t action_count,
                               const AgentConfig& config, sim::RngStream& rng) {
    std::vector<std::size_t> widths;
    widths.push_back(input_width);
    widths.insert(widths.end(), config.hidden_layers.begin(), config.hidden_layers.end());
    widths.push_back(action_count);
    return nn::DenseNetwork::initialized(widths, rng);
}

} // namespace

DdqnAgent::DdqnAgent(std::size_t input_width, std::size_t action_count, AgentConfig config,
                     sim::RngStream& init_rng)
    : DdqnAgent(build_network(input_width, action_count, config, init_rng),
                nn::DenseNetwork(), config) {}

DdqnAgent::DdqnAgent(nn::DenseNetwork online, nn::DenseNetwork target, AgentConfig config)
    : config_(std::move(config)),
      online_(std::move(online)),
      target_(std::move(target)),
      replay_(config_.replay_capacity),
      epsilon_(config_.epsilon_initial, config_.epsilon_decay, config_.epsilon_floor) {
    config_.validate();
    if (target_.layers().empty()) {
        target_ = online_;
    }
    if (!online_.same_architecture(target_)) {
        throw ArchitectureMismatch("online and target networks differ in shape");
    }
    scratch_ = online_.zero_gradients();
}

std::uint32_t DdqnAgent::greedy_action(std::span<const double> state) const {
    return argmax(online_.forward(state));
}

std::uint32_t DdqnAgent::act(std::span<const double> state, double epsilon,
                             sim::RngStream& rng) const {
    if (epsilon > 0.0 && rng.uniform01() < epsilon) {
        return static_cast<std::uint32_t>(rng.uniform_index(action_count()));
    }
    return greedy_action(state);
}

double DdqnAgent::train_minibatch(sim::RngStream& rng) {
    const std::size_t batch = config_.minibatch_size;
    if (replay_.size() < batch) {
        throw InsufficientExperience("replay holds " + std::to_string(replay_.size()) +
                                     " samples, minibatch needs " + std::to_string(batch));
    }
    scratch_.set_zero();
    const double scale = config_.average_minibatch ? 1.0 / static_cast<double>(batch) : 1.0;
    double abs_error = 0.0;
    for (std::size_t i = 0; i < batch; ++i) {
        const Transition& t = replay_.sample(rng);
        const double y = ddqn_target(t, online_, target_, config_.discount);
        const double q = online_.accumulate_gradient(t.state, t.action, y, scratch_, scale);
        abs_error += std::abs(q - y);
    }
    nn::sgd_step(online_, scratch_,
                 nn::SgdConfig{config_.learning_rate, config_.gradient_clip});
    ++training_steps_;
    if (training_steps_ % config_.target_sync_period == 0) {
        nn::copy_parameters(online_, target_);
    }
    return abs_error / static_cast<double>(batch);
}

void save_checkpoint(const DdqnAgent& agent, const CheckpointInfo& info,
                     const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    nn::save_network(agent.online(), (dir / "online.tensor").string());
    nn::save_network(agent.target(), (dir / "target.tensor").string());
    nlohmann::ordered_json manifest;
    manifest["format"] = "deepedge-checkpoint";
    manifest["version"] = 1;
    manifest["episode"] = info.episode;
    manifest["failed_pct"] = info.failed_pct;
    manifest["epsilon"] = agent.epsilon().current();
    manifest["epsilon_steps"] = agent.epsilon().steps();
    manifest["training_steps"] = agent.training_steps();
    manifest["input_width"] = agent.input_width();
    manifest["action_count"] = agent.action_count();
    std::ofstream out(dir / "manifest.json");
    out << manifest.dump(2) << '\n';
}

DdqnAgent load_checkpoint(const std::filesystem::path& dir, const AgentConfig& config,
                          CheckpointInfo* info) {
    const auto manifest_path = dir / "manifest.json";
    if (!std::filesystem::exists(manifest_path) || !std::filesystem::exists(dir / "online.tensor") ||
        !std::filesystem::exists(dir / "target.tensor")) {
        throw MissingCheckpoint("no checkpoint in " + dir.string());
    }
    nlohmann::json manifest;
    try {
        std::ifstream in(manifest_path);
        manifest = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("bad checkpoint manifest: " + std::string(e.what()));
    }
    if (manifest.value("format", "") != "deepedge-checkpoint") {
        throw FormatError("not a deepedge checkpoint: " + manifest_path.string());
    }
    DdqnAgent agent(nn::load_network((dir / "online.tensor").string()),
                    nn::load_network((dir / "target.tensor").string()), config);
    agent.epsilon().set_steps(manifest.value("epsilon_steps", std::uint64_t{0}));
    agent.set_training_steps(manifest.value("training_steps", std::uint64_t{0}));
    if (info) {
        info->episode = manifest.value("episode", std::uint64_t{0});
        info->failed_pct = manifest.value("failed_pct", 0.0);
    }
    return agent;
}

} // namespace deepedge::agent
