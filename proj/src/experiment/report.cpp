#include "deepedge/experiment/report.hpp"

#include "deepedge/bridge/deepedge_orchestrator.hpp"
#include "deepedge/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

namespace deepedge::experiment {

namespace {

constexpr const char* kReportHeader =
    "orchestrator,device_count,seed,app,generated,success,fail_capacity,fail_deadline,"
    "fail_mobility,in_flight,failed_pct,avg_service_time_s,avg_processing_edge_s,"
    "avg_processing_cloud_s,vm_util_edge_pct,vm_util_cloud_pct,cumulative_reward";

constexpr const char* kStatsColumns = "n,mean,stderr,min,max";

std::string fmt(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", value);
    return buf;
}

ReportRow make_row(std::string_view orchestrator, std::size_t device_count, std::uint64_t seed,
                   std::string_view app, const OutcomeCounts& counts, const RunMetrics& run) {
    ReportRow row;
    row.orchestrator = orchestrator;
    row.device_count = device_count;
    row.seed = seed;
    row.app = app;
    row.generated = counts.generated;
    row.success = counts.success;
    row.fail_capacity = counts.fail_capacity;
    row.fail_deadline = counts.fail_deadline;
    row.fail_mobility = counts.fail_mobility;
    row.in_flight = counts.in_flight;
    row.failed_pct = counts.failed_pct();
    row.avg_service_time_s = counts.avg_service_time();
    row.avg_processing_edge_s = counts.avg_processing_edge();
    row.avg_processing_cloud_s = counts.avg_processing_cloud();
    row.vm_util_edge_pct = run.vm_util_edge_pct;
    row.vm_util_cloud_pct = run.vm_util_cloud_pct;
    row.cumulative_reward = run.cumulative_reward;
    return row;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) {
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

template <typename T>
T parse_number(const std::string& text, std::size_t line_no) {
    try {
        std::size_t used = 0;
        T value;
        if constexpr (std::is_floating_point_v<T>) {
            value = static_cast<T>(std::stod(text, &used));
        } else {
            value = static_cast<T>(std::stoull(text, &used));
        }
        if (used != text.size()) {
            throw std::invalid_argument(text);
        }
        return value;
    } catch (const std::exception&) {
        throw FormatError("report line " + std::to_string(line_no) + ": bad number '" + text + "'");
    }
}

// Groups values by a sorted key and writes one stats row per key.
template <typename Key>
std::size_t write_stats(const std::filesystem::path& path, const std::string& key_header,
                        const std::map<Key, std::vector<double>>& groups,
                        const std::function<std::string(const Key&)>& key_text) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << key_header << ',' << kStatsColumns << '\n';
    for (const auto& [key, values] : groups) {
        const auto s = summarize(values);
        out << key_text(key) << ',' << s.n << ',' << fmt(s.mean) << ',' << fmt(s.stderr_) << ','
            << fmt(s.min) << ',' << fmt(s.max) << '\n';
    }
    return groups.size();
}

} // namespace

std::vector<ReportRow> rows_for_run(std::string_view orchestrator, std::size_t device_count,
                                    std::uint64_t seed, const RunMetrics& metrics) {
    std::vector<ReportRow> rows;
    rows.push_back(make_row(orchestrator, device_count, seed, kOverallApp, metrics.overall, metrics));
    for (auto app : workload::kAllApps) {
        rows.push_back(make_row(orchestrator, device_count, seed, workload::to_string(app),
                                metrics.per_app[workload::index_of(app)], metrics));
    }
    return rows;
}

void write_report(const MetricsReport& report, const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << kReportHeader << '\n';
    for (const auto& r : report) {
        out << r.orchestrator << ',' << r.device_count << ',' << r.seed << ',' << r.app << ','
            << r.generated << ',' << r.success << ',' << r.fail_capacity << ','
            << r.fail_deadline << ',' << r.fail_mobility << ',' << r.in_flight << ','
            << fmt(r.failed_pct) << ',' << fmt(r.avg_service_time_s) << ','
            << fmt(r.avg_processing_edge_s) << ',' << fmt(r.avg_processing_cloud_s) << ','
            << fmt(r.vm_util_edge_pct) << ',' << fmt(r.vm_util_cloud_pct) << ','
            << fmt(r.cumulative_reward) << '\n';
    }
}

MetricsReport read_report(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw FormatError("cannot open report " + path.string());
    }
    std::string line;
    if (!std::getline(in, line) || line != kReportHeader) {
        throw FormatError("report " + path.string() + " has an unexpected header");
    }
    MetricsReport report;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const auto cells = split(line);
        if (cells.size() != 17) {
            throw FormatError("report line " + std::to_string(line_no) + " has " +
                              std::to_string(cells.size()) + " fields");
        }
        ReportRow r;
        r.orchestrator = cells[0];
        r.device_count = parse_number<std::size_t>(cells[1], line_no);
        r.seed = parse_number<std::uint64_t>(cells[2], line_no);
        r.app = cells[3];
        r.generated = parse_number<std::uint64_t>(cells[4], line_no);
        r.success = parse_number<std::uint64_t>(cells[5], line_no);
        r.fail_capacity = parse_number<std::uint64_t>(cells[6], line_no);
        r.fail_deadline = parse_number<std::uint64_t>(cells[7], line_no);
        r.fail_mobility = parse_number<std::uint64_t>(cells[8], line_no);
        r.in_flight = parse_number<std::uint64_t>(cells[9], line_no);
        r.failed_pct = parse_number<double>(cells[10], line_no);
        r.avg_service_time_s = parse_number<double>(cells[11], line_no);
        r.avg_processing_edge_s = parse_number<double>(cells[12], line_no);
        r.avg_processing_cloud_s = parse_number<double>(cells[13], line_no);
        r.vm_util_edge_pct = parse_number<double>(cells[14], line_no);
        r.vm_util_cloud_pct = parse_number<double>(cells[15], line_no);
        r.cumulative_reward = parse_number<double>(cells[16], line_no);
        report.push_back(std::move(r));
    }
    return report;
}

SummaryStats summarize(const std::vector<double>& values) {
    SummaryStats s;
    s.n = values.size();
    if (values.empty()) {
        return s;
    }
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    s.mean = sum / static_cast<double>(s.n);
    s.min = *std::min_element(values.begin(), values.end());
    s.max = *std::max_element(values.begin(), values.end());
    if (s.n > 1) {
        double ss = 0.0;
        for (double v : values) {
            ss += (v - s.mean) * (v - s.mean);
        }
        const double sd = std::sqrt(ss / static_cast<double>(s.n - 1));
        s.stderr_ = sd / std::sqrt(static_cast<double>(s.n));
    }
    return s;
}

std::vector<std::filesystem::path> emit_plot_data(const MetricsReport& report,
                                                  const std::filesystem::path& out_dir) {
    if (report.empty()) {
        throw EmptyReport("report has no rows");
    }
    std::filesystem::create_directories(out_dir);

    using Cell = std::pair<std::string, std::size_t>;
    using AppCell = std::tuple<std::string, std::size_t, std::string>;
    const auto cell_text = [](const Cell& c) { return c.first + ',' + std::to_string(c.second); };
    const auto app_text = [](const AppCell& c) {
        return std::get<0>(c) + ',' + std::to_string(std::get<1>(c)) + ',' + std::get<2>(c);
    };

    struct Metric {
        const char* file;
        std::function<double(const ReportRow&)> value;
    };
    const std::vector<Metric> overall_metrics = {
        {"failed_tasks.csv", [](const ReportRow& r) { return r.failed_pct; }},
        {"vm_utilization_edge.csv", [](const ReportRow& r) { return r.vm_util_edge_pct; }},
        {"vm_utilization_cloud.csv", [](const ReportRow& r) { return r.vm_util_cloud_pct; }},
        {"service_time.csv", [](const ReportRow& r) { return r.avg_service_time_s; }},
        {"processing_time_edge.csv", [](const ReportRow& r) { return r.avg_processing_edge_s; }},
        {"processing_time_cloud.csv", [](const ReportRow& r) { return r.avg_processing_cloud_s; }},
        {"cumulative_reward.csv", [](const ReportRow& r) { return r.cumulative_reward; }},
    };

    std::vector<std::filesystem::path> written;
    nlohmann::ordered_json files = nlohmann::ordered_json::array();
    auto note = [&](const std::string& name, const std::string& columns, std::size_t rows) {
        written.push_back(out_dir / name);
        files.push_back({{"file", name}, {"columns", columns}, {"rows", rows}});
    };

    for (const auto& metric : overall_metrics) {
        std::map<Cell, std::vector<double>> groups;
        for (const auto& r : report) {
            if (r.app == kOverallApp) {
                groups[{r.orchestrator, r.device_count}].push_back(metric.value(r));
            }
        }
        const std::size_t rows = write_stats<Cell>(out_dir / metric.file, "orchestrator,device_count",
                                                   groups, cell_text);
        note(metric.file, std::string("orchestrator,device_count,") + kStatsColumns, rows);
    }

    {
        std::map<AppCell, std::vector<double>> groups;
        for (const auto& r : report) {
            if (r.app != kOverallApp) {
                groups[{r.orchestrator, r.device_count, r.app}].push_back(r.failed_pct);
            }
        }
        const std::size_t rows = write_stats<AppCell>(out_dir / "failed_tasks_by_app.csv",
                                                      "orchestrator,device_count,app", groups,
                                                      app_text);
        note("failed_tasks_by_app.csv", std::string("orchestrator,device_count,app,") + kStatsColumns,
             rows);
    }

    {
        std::map<AppCell, std::vector<double>> groups;
        for (const auto& r : report) {
            if (r.app != kOverallApp) {
                continue;
            }
            const double done = static_cast<double>(r.success + r.failed());
            const auto share = [&](std::uint64_t n) {
                return done > 0.0 ? 100.0 * static_cast<double>(n) / done : 0.0;
            };
            groups[{r.orchestrator, r.device_count, "capacity"}].push_back(share(r.fail_capacity));
            groups[{r.orchestrator, r.device_count, "deadline"}].push_back(share(r.fail_deadline));
            groups[{r.orchestrator, r.device_count, "mobility"}].push_back(share(r.fail_mobility));
        }
        const std::size_t rows = write_stats<AppCell>(out_dir / "failure_causes.csv",
                                                      "orchestrator,device_count,cause", groups,
                                                      app_text);
        note("failure_causes.csv", std::string("orchestrator,device_count,cause,") + kStatsColumns,
             rows);
    }

    std::vector<std::string> orchestrators;
    std::vector<std::size_t> densities;
    std::vector<std::uint64_t> seeds;
    for (const auto& r : report) {
        orchestrators.push_back(r.orchestrator);
        densities.push_back(r.device_count);
        seeds.push_back(r.seed);
    }
    auto unique_sorted = [](auto& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    unique_sorted(orchestrators);
    unique_sorted(densities);
    unique_sorted(seeds);

    nlohmann::ordered_json manifest;
    manifest["format"] = "deepedge-plot-data";
    manifest["version"] = 1;
    manifest["orchestrators"] = orchestrators;
    manifest["device_counts"] = densities;
    manifest["seeds"] = seeds;
    manifest["files"] = files;
    {
        std::ofstream out(out_dir / "manifest.json");
        out << manifest.dump(2) << '\n';
    }
    written.push_back(out_dir / "manifest.json");
    return written;
}

unsigned worker_count_from_env() {
    if (const char* env = std::getenv("DEEPEDGE_WORKERS")) {
        char* end = nullptr;
        const long value = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && value > 0) {
            return static_cast<unsigned>(value);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

MetricsReport run_evaluation(const ScenarioConfig& config,
                             const std::optional<std::filesystem::path>& checkpoint,
                             unsigned workers) {
    config.validate();
    const bool wants_deepedge = std::find(config.orchestrators.begin(), config.orchestrators.end(),
                                          "deepedge") != config.orchestrators.end();
    std::optional<agent::DdqnAgent> trained;
    if (wants_deepedge) {
        if (!checkpoint) {
            throw MissingCheckpoint("deepedge evaluation needs --checkpoint");
        }
        trained.emplace(agent::load_checkpoint(*checkpoint, config.agent));
        const std::uint32_t n = config.compute.edge_server_count;
        if (trained->input_width() != orchestration::kStaticFeatureCount + n ||
            trained->action_count() != n + 1) {
            throw ArchitectureMismatch("checkpoint was trained for a different edge server count");
        }
    }

    struct CellSpec {
        std::string orchestrator;
        std::size_t device_count;
        std::uint64_t seed;
    };
    std::vector<CellSpec> cells;
    for (const auto& name : config.orchestrators) {
        for (auto devices : config.device_counts) {
            for (auto seed : config.seed_list()) {
                cells.push_back({name, devices, seed});
            }
        }
    }

    std::vector<RunMetrics> results(cells.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) {
                return;
            }
            try {
                const CellSpec& cell = cells[i];
                std::unique_ptr<orchestration::Orchestrator> orchestrator;
                if (cell.orchestrator == "deepedge") {
                    orchestrator = std::make_unique<bridge::GreedyDeepEdgeOrchestrator>(
                        trained->online(), make_normalizer(config, cell.device_count));
                } else {
                    orchestrator =
                        orchestration::make_baseline(cell.orchestrator, cell.seed, config.thresholds);
                }
                EdgeSimulation simulation(config, cell.device_count, cell.seed, *orchestrator);
                results[i] = simulation.run();
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next = cells.size();
                return;
            }
        }
    };

    const unsigned count = std::max(1u, std::min<unsigned>(workers, cells.size()));
    if (count == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < count; ++w) {
            pool.emplace_back(worker);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    MetricsReport report;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        auto rows = rows_for_run(cells[i].orchestrator, cells[i].device_count, cells[i].seed,
                                 results[i]);
        report.insert(report.end(), rows.begin(), rows.end());
    }
    return report;
}

} // namespace deepedge::experiment
