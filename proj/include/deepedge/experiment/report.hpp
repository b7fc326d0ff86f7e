#pragma once

#include "deepedge/experiment/config.hpp"
#include "deepedge/experiment/simulation.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace deepedge::experiment {

/// One (orchestrator, device_count, seed, app) line of the metrics report.
/// app is "overall" or an application name. VM utilization and reward are
/// cell-level values repeated on each app row of the cell.
struct ReportRow {
    std::string orchestrator;
    std::size_t device_count = 0;
    std::uint64_t seed = 0;
    std::string app;
    std::uint64_t generated = 0;
    std::uint64_t success = 0;
    std::uint64_t fail_capacity = 0;
    std::uint64_t fail_deadline = 0;
    std::uint64_t fail_mobility = 0;
    std::uint64_t in_flight = 0;
    double failed_pct = 0.0;
    double avg_service_time_s = 0.0;
    double avg_processing_edge_s = 0.0;
    double avg_processing_cloud_s = 0.0;
    double vm_util_edge_pct = 0.0;
    double vm_util_cloud_pct = 0.0;
    double cumulative_reward = 0.0;

    std::uint64_t failed() const { return fail_capacity + fail_deadline + fail_mobility; }
};

using MetricsReport = std::vector<ReportRow>;

inline constexpr std::string_view kOverallApp = "overall";

/// Rows for one run: the overall row followed by one row per application.
std::vector<ReportRow> rows_for_run(std::string_view orchestrator, std::size_t device_count,
                                    std::uint64_t seed, const RunMetrics& metrics);

void write_report(const MetricsReport& report, const std::filesystem::path& path);
/// Throws FormatError on a malformed file.
MetricsReport read_report(const std::filesystem::path& path);

struct SummaryStats {
    std::size_t n = 0;
    double mean = 0.0;
    double stderr_ = 0.0;
    double min = 0.0;
    double max = 0.0;
};

SummaryStats summarize(const std::vector<double>& values);

/// Writes one delimited file per metric plus manifest.json and returns the
/// paths written. Throws EmptyReport for an empty report.
std::vector<std::filesystem::path> emit_plot_data(const MetricsReport& report,
                                                  const std::filesystem::path& out_dir);

/// Evaluates every configured orchestrator over device_counts x seeds.
/// DeepEdge runs greedily from `checkpoint`; MissingCheckpoint if it is
/// requested without one. Cells run on `workers` threads.
MetricsReport run_evaluation(const ScenarioConfig& config,
                             const std::optional<std::filesystem::path>& checkpoint,
                             unsigned workers = 1);

/// DEEPEDGE_WORKERS if set and positive, else the hardware concurrency.
unsigned worker_count_from_env();

} // namespace deepedge::experiment
