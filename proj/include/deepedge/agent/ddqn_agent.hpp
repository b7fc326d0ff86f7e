#pragma once

#include "deepedge/agent/replay_buffer.hpp"
#include "deepedge/nn/dense_network.hpp"
#include "deepedge/orchestration/state.hpp"
#include "deepedge/sim/rng.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace deepedge::agent {

struct AgentConfig {
    double discount = 0.8;
    double learning_rate = 1e-4;
    std::size_t minibatch_size = 4;
    std::uint64_t target_sync_period = 10;
    std::size_t replay_capacity = 1'000'000;
    double epsilon_initial = 1.0;
    double epsilon_decay = 0.99;
    double epsilon_floor = 0.1;
    std::vector<std::size_t> hidden_layers = {128, 128};
    std::optional<double> gradient_clip = 10.0;
    // Mean of the per-sample gradients when true, their sum otherwise.
    bool average_minibatch = true;

    void validate() const;
};

/// Index of the largest value; ties go to the lowest index.
std::uint32_t argmax(std::span<const double> values);

/// r if terminal, else r + discount * Q_target(s', argmax_a Q_online(s', a)).
double ddqn_target(const Transition& transition, const nn::DenseNetwork& online,
                   const nn::DenseNetwork& target, double discount);

/// The single-network form: the target network both selects and evaluates.
double dqn_target(const Transition& transition, const nn::DenseNetwork& target, double discount);

/// Maps raw state features to [0, 1].
struct Normalizer {
    double wan_bandwidth_max = 20.0;
    double man_delay_max = orchestration::kSaturatedManDelayS;
    double task_req_capacity_max = 100.0;
    std::uint32_t edge_server_count = 14;
    double delay_sensitivity_max = 1.0;
    // Cumulative offload counters are divided by the scenario's expected task total.
    double expected_task_total = 1.0;
    double active_man_max = 50.0;
    double edge_load_max = 100.0;

    std::vector<double> operator()(const orchestration::StateVector& raw) const;
};

/// Double deep Q-network learner: epsilon-greedy acting on the online
/// network, uniform experience replay, and periodic target synchronization.
class DdqnAgent {
public:
    DdqnAgent(std::size_t input_width, std::size_t action_count, AgentConfig config,
              sim::RngStream& init_rng);
    /// Wraps existing networks (e.g. from a checkpoint).
    DdqnAgent(nn::DenseNetwork online, nn::DenseNetwork target, AgentConfig config);

    const AgentConfig& config() const { return config_; }
    std::size_t action_count() const { return online_.output_width(); }
    std::size_t input_width() const { return online_.input_width(); }

    /// With probability epsilon a uniform action, else the greedy one.
    std::uint32_t act(std::span<const double> state, double epsilon, sim::RngStream& rng) const;
    std::uint32_t greedy_action(std::span<const double> state) const;

    void remember(Transition transition) { replay_.push(std::move(transition)); }

    /// One SGD step on a uniformly sampled minibatch; returns mean |TD error|.
    /// Throws InsufficientExperience while the buffer holds fewer than
    /// minibatch_size samples.
    double train_minibatch(sim::RngStream& rng);

    const nn::DenseNetwork& online() const { return online_; }
    const nn::DenseNetwork& target() const { return target_; }
    nn::DenseNetwork& online() { return online_; }
    nn::DenseNetwork& target() { return target_; }
    const ReplayBuffer& replay() const { return replay_; }
    EpsilonSchedule& epsilon() { return epsilon_; }
    const EpsilonSchedule& epsilon() const { return epsilon_; }
    std::uint64_t training_steps() const { return training_steps_; }
    void set_training_steps(std::uint64_t steps) { training_steps_ = steps; }

private:
    AgentConfig config_;
    nn::DenseNetwork online_;
    nn::DenseNetwork target_;
    ReplayBuffer replay_;
    EpsilonSchedule epsilon_;
    std::uint64_t training_steps_ = 0;
    nn::Gradients scratch_;
};

struct CheckpointInfo {
    std::uint64_t episode = 0;
    double failed_pct = 0.0;
};

/// Writes online.tensor, target.tensor and manifest.json into `dir`.
void save_checkpoint(const DdqnAgent& agent, const CheckpointInfo& info,
                     const std::filesystem::path& dir);

/// Throws MissingCheckpoint when the directory or its files are absent.
DdqnAgent load_checkpoint(const std::filesystem::path& dir, const AgentConfig& config,
                          CheckpointInfo* info = nullptr);

} // namespace deepedge::agent
