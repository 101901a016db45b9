#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "logguard/env.hpp"

namespace logguard {

struct EpisodeRecord {
    std::size_t episode = 0;
    double total_reward = 0.0;
    std::size_t steps = 0;
    std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0, neutral = 0;
    std::array<std::uint64_t, kActionCount> actions{};

    bool detected() const { return tp >= 1; }
    void record(Action action, Outcome outcome, double reward);
    friend bool operator==(const EpisodeRecord&, const EpisodeRecord&) = default;
};

struct ClassificationMetrics {
    double precision = 1.0;
    double recall = 1.0;
    double f1 = 1.0;
    // False when there were no predicted and no actual positives; the 1.0s
    // above are then conventions, not measurements.
    bool has_support = false;
};

/// Zero predicted positives gives precision 1, zero actual positives gives
/// recall 1, matching the start-of-training convention for these curves.
ClassificationMetrics classification_metrics(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn);

double detection_rate(std::span<const EpisodeRecord> records);

struct RewardStats {
    double mean = 0.0;
    double variance = 0.0;  // population (1/n)
    double sd = 0.0;
};
RewardStats reward_stats(std::span<const double> rewards);

/// Per-episode series derived from EpisodeRecords, all cumulative unless noted.
struct MetricsFrame {
    std::vector<double> reward;
    std::vector<double> detected;  // 0/1 per episode
    std::vector<double> detection_rate;
    std::vector<double> cumulative_tp;
    std::vector<double> precision;
    std::vector<double> recall;
    std::vector<double> f1;
    std::vector<double> reward_mean;
    std::vector<double> reward_variance;
    // Population variance of the last `window` episode rewards.
    std::vector<double> reward_variance_window;
    // Fraction of each action within the episode.
    std::array<std::vector<double>, kActionCount> action_share;

    std::size_t size() const { return reward.size(); }
};

MetricsFrame build_metrics_frame(std::span<const EpisodeRecord> records, std::size_t variance_window = 100);

struct RunSummary {
    std::size_t episodes = 0;
    double detection_rate = 0.0;
    std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0, neutral = 0;
    ClassificationMetrics metrics;
    RewardStats reward;
    double steps_per_episode = 0.0;
    std::array<double, kActionCount> action_share{};
};
RunSummary summarize(std::span<const EpisodeRecord> records);

// CSV: episode,reward,steps,tp,fp,fn,tn,neutral,a0,a1,a2,a3. Lines starting
// with '#' are comments (used for the config echo) and skipped on read.
inline constexpr const char* kEpisodeCsvHeader = "episode,reward,steps,tp,fp,fn,tn,neutral,a0,a1,a2,a3";
void write_episodes_csv(std::ostream& out, std::span<const EpisodeRecord> records,
                        const std::string& comment = {});
std::vector<EpisodeRecord> read_episodes_csv(std::istream& in);
std::vector<EpisodeRecord> read_episodes_csv(const std::filesystem::path& path);

/// Shortest representation that round-trips to the same double.
std::string format_double(double value);

}  // namespace logguard
