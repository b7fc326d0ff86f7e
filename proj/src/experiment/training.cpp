#include "deepedge/experiment/training.hpp"

#include "deepedge/bridge/deepedge_orchestrator.hpp"
#include "deepedge/error.hpp"
#include "deepedge/experiment/simulation.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

namespace deepedge::experiment {

namespace {

void write_log(const std::vector<EpisodeLog>& log, const std::filesystem::path& path) {
    std::ofstream out(path);
    out << "episode,seed,epsilon,generated,failed,in_flight,failed_pct,cumulative_reward,"
           "forwarded,training_steps,mean_td_error\n";
    char buf[256];
    for (const auto& e : log) {
        std::snprintf(buf, sizeof buf, "%zu,%llu,%.6f,%llu,%llu,%llu,%.6f,%.1f,%llu,%llu,%.6f\n",
                      e.episode, static_cast<unsigned long long>(e.seed), e.epsilon,
                      static_cast<unsigned long long>(e.generated),
                      static_cast<unsigned long long>(e.failed),
                      static_cast<unsigned long long>(e.in_flight), e.failed_pct,
                      e.cumulative_reward, static_cast<unsigned long long>(e.forwarded),
                      static_cast<unsigned long long>(e.training_steps), e.mean_td_error);
        out << buf;
    }
}

} // namespace

TrainingResult run_training(const ScenarioConfig& config, std::size_t episodes,
                            const std::filesystem::path& out_dir, std::ostream* progress) {
    if (episodes == 0) {
        throw InvalidConfig("training needs at least one episode");
    }
    config.validate();
    std::filesystem::create_directories(out_dir);

    const std::size_t devices = config.training.device_count;
    const std::uint32_t n = config.compute.edge_server_count;
    const std::uint64_t seed = config.training.seed;

    sim::RngStream init_rng("network-init", seed);
    sim::RngStream exploration_rng("agent-exploration", seed);
    sim::RngStream replay_rng("agent-replay", seed);
    agent::DdqnAgent agent(orchestration::kStaticFeatureCount + n, n + 1, config.agent, init_rng);
    const agent::Normalizer normalizer = make_normalizer(config, devices);

    TrainingResult result;
    result.best_checkpoint = out_dir / "checkpoint";
    result.final_checkpoint = out_dir / "final";

    for (std::size_t e = 0; e < episodes; ++e) {
        EpisodeLog row;
        row.episode = e;
        row.seed = seed + e;
        row.epsilon = agent.epsilon().current();

        bridge::DeepEdgeOrchestrator orchestrator(agent, normalizer, row.epsilon, exploration_rng,
                                                  replay_rng);
        EdgeSimulation simulation(config, devices, row.seed, orchestrator);
        const RunMetrics metrics = simulation.run();

        row.generated = metrics.overall.generated;
        row.failed = metrics.overall.failed();
        row.in_flight = metrics.overall.in_flight;
        row.failed_pct = metrics.overall.failed_pct();
        row.cumulative_reward = metrics.cumulative_reward;
        row.forwarded = orchestrator.bridge().forwarded();
        row.training_steps = orchestrator.training_steps();
        row.mean_td_error = orchestrator.mean_td_error();
        result.episodes.push_back(row);
        agent.epsilon().decay();

        if (e == 0 || row.failed_pct < result.best_failed_pct) {
            result.best_episode = e;
            result.best_failed_pct = row.failed_pct;
            agent::save_checkpoint(agent, {e, row.failed_pct}, result.best_checkpoint);
        }
        if (progress) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "episode %zu  eps=%.3f  failed=%.2f%%  tasks=%llu  steps=%llu\n", e,
                          row.epsilon, row.failed_pct,
                          static_cast<unsigned long long>(row.generated),
                          static_cast<unsigned long long>(row.training_steps));
            *progress << buf << std::flush;
        }
    }
    agent::save_checkpoint(agent, {episodes - 1, result.episodes.back().failed_pct},
                           result.final_checkpoint);
    write_log(result.episodes, out_dir / "training_log.csv");
    return result;
}

} // namespace deepedge::experiment
