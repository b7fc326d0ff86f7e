// Command-line driver: training, evaluation sweeps and plot-data emission.

#include "deepedge/error.hpp"
#include "deepedge/experiment/config.hpp"
#include "deepedge/experiment/report.hpp"
#include "deepedge/experiment/training.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace fs = std::filesystem;
using namespace deepedge;

namespace {

int cmd_train(const fs::path& config_path, std::optional<std::size_t> episodes, const fs::path& out) {
    const auto config = experiment::load_config(config_path);
    const auto result = experiment::run_training(
        config, episodes.value_or(config.training.episodes), out, &std::cout);
    std::cout << "best episode " << result.best_episode << " (" << result.best_failed_pct
              << "% failed) -> " << result.best_checkpoint.string() << '\n';
    return 0;
}

int cmd_eval(const fs::path& config_path, const std::optional<fs::path>& checkpoint,
             const std::vector<std::string>& orchestrators, std::optional<unsigned> workers,
             const fs::path& out) {
    auto config = experiment::load_config(config_path);
    if (!orchestrators.empty()) {
        config.orchestrators = orchestrators;
        config.validate();
    }
    const auto report = experiment::run_evaluation(
        config, checkpoint, workers.value_or(experiment::worker_count_from_env()));
    fs::create_directories(out);
    experiment::write_report(report, out / "report.csv");
    const auto files = experiment::emit_plot_data(report, out);
    std::cout << "wrote " << (out / "report.csv").string() << " and " << files.size()
              << " plot files\n";
    return 0;
}

int cmd_emit(const fs::path& report_path, const fs::path& out) {
    const auto files = experiment::emit_plot_data(experiment::read_report(report_path), out);
    for (const auto& f : files) {
        std::cout << f.string() << '\n';
    }
    return 0;
}

int cmd_config(const std::string& preset, const fs::path& out) {
    experiment::ScenarioConfig config;
    if (preset == "paper") {
        config = experiment::paper_defaults();
    } else if (preset == "desk") {
        config = experiment::desk_preset();
    } else {
        throw InvalidConfig("unknown preset '" + preset + "' (expected paper or desk)");
    }
    experiment::save_config(config, out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Edge-cloud task offloading simulator with a DDQN orchestrator"};
    app.require_subcommand(1);

    fs::path config_path;
    fs::path out_dir;

    auto* train = app.add_subcommand("train", "Train the DDQN orchestrator online");
    std::optional<std::size_t> episodes;
    train->add_option("--config", config_path, "Scenario config (JSON)")->required();
    train->add_option("--episodes", episodes, "Episode count (default: from config)");
    train->add_option("--out", out_dir, "Output directory")->required();

    auto* eval = app.add_subcommand("eval", "Sweep orchestrators x densities x seeds");
    std::optional<fs::path> checkpoint;
    std::vector<std::string> orchestrators;
    std::optional<unsigned> workers;
    eval->add_option("--config", config_path, "Scenario config (JSON)")->required();
    eval->add_option("--checkpoint", checkpoint, "Checkpoint directory for deepedge");
    eval->add_option("--orchestrator", orchestrators, "Restrict to these orchestrators");
    eval->add_option("--workers", workers, "Worker threads (default: DEEPEDGE_WORKERS or cores)");
    eval->add_option("--out", out_dir, "Output directory")->required();

    auto* emit = app.add_subcommand("emit-plots", "Aggregate a report into per-metric files");
    fs::path report_path;
    emit->add_option("--report", report_path, "report.csv from eval")->required();
    emit->add_option("--out", out_dir, "Output directory")->required();

    auto* preset = app.add_subcommand("config", "Write a preset scenario config");
    std::string preset_name = "desk";
    fs::path preset_out;
    preset->add_option("--preset", preset_name, "paper or desk");
    preset->add_option("--out", preset_out, "Destination file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*train) {
            return cmd_train(config_path, episodes, out_dir);
        }
        if (*eval) {
            return cmd_eval(config_path, checkpoint, orchestrators, workers, out_dir);
        }
        if (*emit) {
            return cmd_emit(report_path, out_dir);
        }
        return cmd_config(preset_name, preset_out);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "fatal: " << e.what() << '\n';
        return 1;
    }
}
