#include "logguard/metrics.hpp"

#include <charconv>
#include <cmath>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace logguard {

void EpisodeRecord::record(Action action, Outcome outcome, double reward) {
    total_reward += reward;
    ++steps;
    ++actions[index_of(action)];
    switch (outcome) {
        case Outcome::TruePositive: ++tp; break;
        case Outcome::FalsePositive: ++fp; break;
        case Outcome::FalseNegative: ++fn; break;
        case Outcome::TrueNegative: ++tn; break;
        case Outcome::Neutral: ++neutral; break;
    }
}

ClassificationMetrics classification_metrics(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn) {
    ClassificationMetrics m;
    m.has_support = (tp + fp) > 0 || (tp + fn) > 0;
    m.precision = (tp + fp) == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
    m.recall = (tp + fn) == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
    const double denom = m.precision + m.recall;
    m.f1 = denom == 0.0 ? 0.0 : 2.0 * m.precision * m.recall / denom;
    return m;
}

double detection_rate(std::span<const EpisodeRecord> records) {
    if (records.empty()) throw std::invalid_argument("detection rate of zero episodes");
    std::size_t hits = 0;
    for (const auto& r : records) hits += r.detected() ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(records.size());
}

RewardStats reward_stats(std::span<const double> rewards) {
    if (rewards.empty()) throw std::invalid_argument("reward statistics of an empty sample");
    const double n = static_cast<double>(rewards.size());
    RewardStats s;
    for (double r : rewards) s.mean += r;
    s.mean /= n;
    for (double r : rewards) s.variance += (r - s.mean) * (r - s.mean);
    s.variance /= n;
    s.sd = std::sqrt(s.variance);
    return s;
}

MetricsFrame build_metrics_frame(std::span<const EpisodeRecord> records, std::size_t variance_window) {
    if (variance_window == 0) throw std::invalid_argument("variance window must be positive");
    MetricsFrame f;
    const std::size_t n = records.size();
    for (auto* v : {&f.reward, &f.detected, &f.detection_rate, &f.cumulative_tp, &f.precision, &f.recall,
                    &f.f1, &f.reward_mean, &f.reward_variance, &f.reward_variance_window}) {
        v->reserve(n);
    }
    std::uint64_t tp = 0, fp = 0, fn = 0, hits = 0;
    double mean = 0.0, m2 = 0.0;  // Welford
    std::deque<double> window;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& r = records[i];
        tp += r.tp;
        fp += r.fp;
        fn += r.fn;
        hits += r.detected() ? 1 : 0;
        const double count = static_cast<double>(i + 1);
        const double d = r.total_reward - mean;
        mean += d / count;
        m2 += d * (r.total_reward - mean);

        window.push_back(r.total_reward);
        if (window.size() > variance_window) window.pop_front();
        double wm = 0.0, wv = 0.0;
        for (double x : window) wm += x;
        wm /= static_cast<double>(window.size());
        for (double x : window) wv += (x - wm) * (x - wm);
        wv /= static_cast<double>(window.size());

        auto m = classification_metrics(tp, fp, fn);
        f.reward.push_back(r.total_reward);
        f.detected.push_back(r.detected() ? 1.0 : 0.0);
        f.detection_rate.push_back(static_cast<double>(hits) / count);
        f.cumulative_tp.push_back(static_cast<double>(tp));
        f.precision.push_back(m.precision);
        f.recall.push_back(m.recall);
        f.f1.push_back(m.f1);
        f.reward_mean.push_back(mean);
        f.reward_variance.push_back(m2 / count);
        f.reward_variance_window.push_back(wv);
        for (std::size_t a = 0; a < kActionCount; ++a) {
            f.action_share[a].push_back(r.steps == 0 ? 0.0
                                                     : static_cast<double>(r.actions[a]) /
                                                           static_cast<double>(r.steps));
        }
    }
    return f;
}

RunSummary summarize(std::span<const EpisodeRecord> records) {
    RunSummary s;
    s.episodes = records.size();
    if (records.empty()) return s;
    std::vector<double> rewards;
    rewards.reserve(records.size());
    std::uint64_t steps = 0;
    std::array<std::uint64_t, kActionCount> actions{};
    for (const auto& r : records) {
        s.tp += r.tp;
        s.fp += r.fp;
        s.fn += r.fn;
        s.tn += r.tn;
        s.neutral += r.neutral;
        steps += r.steps;
        for (std::size_t a = 0; a < kActionCount; ++a) actions[a] += r.actions[a];
        rewards.push_back(r.total_reward);
    }
    s.detection_rate = detection_rate(records);
    s.metrics = classification_metrics(s.tp, s.fp, s.fn);
    s.reward = reward_stats(rewards);
    s.steps_per_episode = static_cast<double>(steps) / static_cast<double>(records.size());
    for (std::size_t a = 0; a < kActionCount; ++a) {
        s.action_share[a] = steps == 0 ? 0.0 : static_cast<double>(actions[a]) / static_cast<double>(steps);
    }
    return s;
}

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) throw std::runtime_error("cannot format double");
    return std::string(buf, ptr);
}

void write_episodes_csv(std::ostream& out, std::span<const EpisodeRecord> records,
                        const std::string& comment) {
    if (!comment.empty()) out << "# " << comment << '\n';
    out << kEpisodeCsvHeader << '\n';
    for (const auto& r : records) {
        out << r.episode << ',' << format_double(r.total_reward) << ',' << r.steps << ',' << r.tp << ','
            << r.fp << ',' << r.fn << ',' << r.tn << ',' << r.neutral;
        for (auto a : r.actions) out << ',' << a;
        out << '\n';
    }
}

std::vector<EpisodeRecord> read_episodes_csv(std::istream& in) {
    std::vector<EpisodeRecord> records;
    std::string line;
    bool header_seen = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line != kEpisodeCsvHeader) {
                throw std::runtime_error("episode CSV: unexpected header '" + line + "'");
            }
            header_seen = true;
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 12) {
            throw std::runtime_error("episode CSV line " + std::to_string(line_no) + ": expected 12 columns");
        }
        auto to_u = [&](const std::string& s) {
            std::uint64_t v = 0;
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc{} || ptr != s.data() + s.size()) {
                throw std::runtime_error("episode CSV line " + std::to_string(line_no) + ": bad integer '" + s + "'");
            }
            return v;
        };
        EpisodeRecord r;
        r.episode = to_u(cells[0]);
        {
            const auto& s = cells[1];
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), r.total_reward);
            if (ec != std::errc{} || ptr != s.data() + s.size()) {
                throw std::runtime_error("episode CSV line " + std::to_string(line_no) + ": bad reward");
            }
        }
        r.steps = to_u(cells[2]);
        r.tp = to_u(cells[3]);
        r.fp = to_u(cells[4]);
        r.fn = to_u(cells[5]);
        r.tn = to_u(cells[6]);
        r.neutral = to_u(cells[7]);
        for (std::size_t a = 0; a < kActionCount; ++a) r.actions[a] = to_u(cells[8 + a]);
        if (r.tp + r.fp + r.fn + r.tn + r.neutral != r.steps) {
            throw std::runtime_error("episode CSV line " + std::to_string(line_no) +
                                     ": outcome counts do not partition steps");
        }
        records.push_back(r);
    }
    if (!header_seen) throw std::runtime_error("episode CSV has no header");
    return records;
}

std::vector<EpisodeRecord> read_episodes_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return read_episodes_csv(in);
}

}  // namespace logguard
