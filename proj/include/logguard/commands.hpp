#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "logguard/config.hpp"
#include "logguard/env.hpp"
#include "logguard/metrics.hpp"

namespace logguard {

namespace fs = std::filesystem;

/// Thrown for user-facing failures (bad inputs, missing files); the CLI prints
/// the message and exits nonzero.
class CommandError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Writes `log_path`, its labels sidecar and `<log_path>.summary.json`.
nlohmann::json cmd_generate(const RunConfig& config, const fs::path& log_path, std::ostream& report);

struct TrainOptions {
    std::string agent = "logguardq";
    fs::path dataset;
    fs::path out_dir;
    std::size_t episodes = 0;  // 0: protocol.episodes
    std::size_t runs = 1;
};

/// Per run: `<agent>_run<k>.csv` and `<agent>_run<k>.policy`; plus
/// `<agent>_summary.json` over all runs.
nlohmann::json cmd_train(const RunConfig& config, const TrainOptions& options, std::ostream& report);

struct CompareOptions {
    std::vector<std::string> agents{"logguardq", "dqn", "ppo"};
    fs::path dataset;
    fs::path out_dir;
    // When set, read completed run sets from here instead of training.
    fs::path from_dir;
    std::size_t episodes = 0;  // 0: protocol.episodes
    std::size_t runs = 0;      // 0: protocol.runs
};

inline constexpr const char* kCurveFiles[] = {"curve_f1.csv",     "curve_variance.csv",
                                              "curve_reward.csv", "curve_actions.csv",
                                              "curve_precision_recall.csv", "curve_cumulative_detections.csv"};

/// Pairwise Mann-Whitney tests on episode rewards, a per-agent metric table
/// and six smoothed curve files. Writes `report.json`.
nlohmann::json cmd_compare(const RunConfig& config, const CompareOptions& options, std::ostream& report);

struct SensitivityOptions {
    fs::path dataset;
    fs::path out_dir;
};

/// Grid sweep of initial temperature and curiosity weight for LogGuardQ.
/// Writes `sensitivity.json`.
nlohmann::json cmd_sensitivity(const RunConfig& config, const SensitivityOptions& options, std::ostream& report);

/// Renders `report.md` and one SVG per curve file from a compare output dir.
void cmd_report(const fs::path& dir, std::ostream& report);

// ---- helpers shared with tests ----------------------------------------------

/// Agent-by-run episode records loaded from `<agent>_run<k>.csv` files.
std::vector<std::vector<EpisodeRecord>> load_run_set(const fs::path& dir, const std::string& agent);

/// Mean over runs of a per-episode series; all runs must have equal length.
std::vector<double> mean_over_runs(const std::vector<std::vector<double>>& runs);

/// Savitzky-Golay with the window shrunk to fit short series.
std::vector<double> smooth_curve(std::span<const double> series, std::size_t window, std::size_t poly);

struct CurveTable {
    std::vector<std::string> columns;  // first column is "episode"
    std::vector<std::vector<double>> values;  // values[c][row]
};
void write_curve_table(const fs::path& path, const CurveTable& table, const std::string& comment);
CurveTable read_curve_table(const fs::path& path);

std::shared_ptr<const Dataset> load_dataset(const fs::path& path, const RunConfig& config);

}  // namespace logguard
