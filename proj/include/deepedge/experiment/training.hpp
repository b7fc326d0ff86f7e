#pragma once

#include "deepedge/agent/ddqn_agent.hpp"
#include "deepedge/experiment/config.hpp"

#include <filesystem>
#include <iosfwd>
#include <vector>

namespace deepedge::experiment {

struct EpisodeLog {
    std::size_t episode = 0;
    std::uint64_t seed = 0;
    double epsilon = 0.0;
    std::uint64_t generated = 0;
    std::uint64_t failed = 0;
    std::uint64_t in_flight = 0;
    double failed_pct = 0.0;
    double cumulative_reward = 0.0;
    std::uint64_t forwarded = 0;
    std::uint64_t training_steps = 0;
    double mean_td_error = 0.0;
};

struct TrainingResult {
    std::vector<EpisodeLog> episodes;
    std::size_t best_episode = 0;
    double best_failed_pct = 0.0;
    std::filesystem::path best_checkpoint;
    std::filesystem::path final_checkpoint;
};

/// Trains a fresh agent online for `episodes` episodes at the configured
/// training density. Episode e runs with seed training.seed + e and epsilon
/// decays once per episode. Writes training_log.csv, the best checkpoint
/// (by failed-task percentage) under out_dir/checkpoint and the last one
/// under out_dir/final. Throws InvalidConfig for zero episodes.
TrainingResult run_training(const ScenarioConfig& config, std::size_t episodes,
                            const std::filesystem::path& out_dir,
                            std::ostream* progress = nullptr);

} // namespace deepedge::experiment
