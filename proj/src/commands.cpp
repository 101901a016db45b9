#include "logguard/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <regex>
#include <set>
#include <sstream>

#include "logguard/log_entry.hpp"
#include "logguard/loggen.hpp"
#include "logguard/logguardq.hpp"
#include "logguard/savgol.hpp"
#include "logguard/sensitivity.hpp"
#include "logguard/stats.hpp"
#include "logguard/svg.hpp"
#include "logguard/training.hpp"

namespace logguard {

using nlohmann::json;

namespace {

void ensure_dir(const fs::path& dir) {
    if (dir.empty()) return;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw CommandError("cannot create directory " + dir.string() + ": " + ec.message());
}

void write_text(const fs::path& path, const std::string& text) {
    ensure_dir(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CommandError("cannot write " + path.string());
    out << text;
    if (!out) throw CommandError("failed writing " + path.string());
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw CommandError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw CommandError(path.string() + ": " + e.what());
    }
}

std::string config_comment(const RunConfig& config) { return "config " + json(config).dump(); }

json metrics_json(const RunSummary& s) {
    return json{{"episodes", s.episodes},
                {"detection_rate", s.detection_rate},
                {"tp", s.tp},
                {"fp", s.fp},
                {"fn", s.fn},
                {"tn", s.tn},
                {"neutral", s.neutral},
                {"precision", s.metrics.precision},
                {"recall", s.metrics.recall},
                {"f1", s.metrics.f1},
                {"has_support", s.metrics.has_support},
                {"reward_mean", s.reward.mean},
                {"reward_sd", s.reward.sd},
                {"steps_per_episode", s.steps_per_episode},
                {"action_share", s.action_share}};
}

struct MeanSd {
    double mean = 0.0, sd = 0.0;
};

// Sample SD across runs (0 for a single run).
MeanSd across_runs(const std::vector<double>& v) {
    MeanSd m;
    if (v.empty()) return m;
    for (double x : v) m.mean += x;
    m.mean /= static_cast<double>(v.size());
    if (v.size() < 2) return m;
    double ss = 0.0;
    for (double x : v) ss += (x - m.mean) * (x - m.mean);
    m.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
    return m;
}

std::vector<EpisodeRecord> pooled(const std::vector<std::vector<EpisodeRecord>>& runs) {
    std::vector<EpisodeRecord> all;
    for (const auto& r : runs) all.insert(all.end(), r.begin(), r.end());
    return all;
}

json aggregate_json(const std::vector<std::vector<EpisodeRecord>>& runs) {
    std::vector<double> rates;
    for (const auto& r : runs) rates.push_back(detection_rate(r));
    const auto all = pooled(runs);
    const auto s = summarize(all);
    const auto d = across_runs(rates);
    json j = metrics_json(s);
    j["runs"] = runs.size();
    j["detection_rate_mean"] = d.mean;
    j["detection_rate_sd"] = d.sd;
    j.erase("detection_rate");
    j["detection_rate_pooled"] = s.detection_rate;
    return j;
}

std::string percent(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", 100.0 * v);
    return buf;
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return v;
}

}  // namespace

// ---- helpers ----------------------------------------------------------------

std::shared_ptr<const Dataset> load_dataset(const fs::path& path, const RunConfig& config) {
    if (path.empty()) throw CommandError("no dataset given (use --data)");
    if (!fs::exists(path)) throw CommandError("dataset not found: " + path.string());
    auto entries = read_log(path);
    if (entries.empty()) throw CommandError("dataset is empty: " + path.string());
    const auto labels = labels_path_for(path);
    if (fs::exists(labels)) read_labels(labels, entries);
    const std::size_t chunk = std::min(config.env.chunk_size, entries.size());
    return std::make_shared<const Dataset>(std::move(entries), chunk);
}

std::vector<std::vector<EpisodeRecord>> load_run_set(const fs::path& dir, const std::string& agent) {
    const std::regex pattern(agent + "_run([0-9]+)\\.csv");
    std::map<std::size_t, fs::path> files;
    if (fs::is_directory(dir)) {
        for (const auto& entry : fs::directory_iterator(dir)) {
            std::smatch m;
            const auto name = entry.path().filename().string();
            if (std::regex_match(name, m, pattern)) files[std::stoul(m[1].str())] = entry.path();
        }
    }
    if (files.empty()) throw CommandError("no run files for agent '" + agent + "' in " + dir.string());
    std::vector<std::vector<EpisodeRecord>> runs;
    std::size_t expected = 0;
    for (const auto& [index, path] : files) {
        if (index != expected++) throw CommandError("run files for '" + agent + "' are not numbered 0..k-1");
        runs.push_back(read_episodes_csv(path));
    }
    return runs;
}

std::vector<double> mean_over_runs(const std::vector<std::vector<double>>& runs) {
    if (runs.empty()) return {};
    std::vector<double> mean(runs.front().size(), 0.0);
    for (const auto& r : runs) {
        if (r.size() != mean.size()) throw std::invalid_argument("runs have different lengths");
        for (std::size_t i = 0; i < r.size(); ++i) mean[i] += r[i];
    }
    for (auto& v : mean) v /= static_cast<double>(runs.size());
    return mean;
}

std::vector<double> smooth_curve(std::span<const double> series, std::size_t window, std::size_t poly) {
    if (series.empty()) return {};
    std::size_t w = std::min(window, series.size() % 2 == 1 ? series.size() : series.size() - 1);
    if (w % 2 == 0) --w;
    return savitzky_golay(series, w, std::min(poly, w - 1));
}

void write_curve_table(const fs::path& path, const CurveTable& table, const std::string& comment) {
    std::ostringstream out;
    if (!comment.empty()) out << "# " << comment << '\n';
    for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c];
    out << '\n';
    const std::size_t rows = table.values.empty() ? 0 : table.values.front().size();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < table.values.size(); ++c) out << (c ? "," : "") << format_double(table.values[c][r]);
        out << '\n';
    }
    write_text(path, out.str());
}

CurveTable read_curve_table(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw CommandError("cannot open " + path.string());
    CurveTable t;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (t.columns.empty()) {
            t.columns = cells;
            t.values.resize(cells.size());
            continue;
        }
        if (cells.size() != t.columns.size()) throw CommandError(path.string() + ": ragged row");
        for (std::size_t c = 0; c < cells.size(); ++c) t.values[c].push_back(std::stod(cells[c]));
    }
    if (t.columns.empty()) throw CommandError(path.string() + ": no header");
    return t;
}

// ---- generate ---------------------------------------------------------------

json cmd_generate(const RunConfig& config, const fs::path& log_path, std::ostream& report) {
    RunConfig resolved = config;
    GenConfig& g = resolved.loggen;
    if (!g.seed) g.seed = config.seed;
    if (g.total_entries > 0) g.chunk_size = std::min(g.chunk_size, g.total_entries);
    std::vector<LogEntry> entries;
    try {
        g.validate();
        entries = generate_dataset(g, EntryProfile::defaults());
    } catch (const std::invalid_argument& e) {
        throw CommandError(std::string("invalid generator config: ") + e.what());
    }
    write_text(log_path, "");  // fail early on an unwritable path
    write_log(log_path, entries);
    write_labels(labels_path_for(log_path), entries);

    std::size_t anomalies = 0, injections = 0;
    double bytes_normal = 0.0, bytes_anomaly = 0.0;
    for (const auto& e : entries) {
        const bool anomalous = e.label.value_or(false);
        anomalies += anomalous ? 1 : 0;
        injections += matches_injection_pattern(e.uri) ? 1 : 0;
        (anomalous ? bytes_anomaly : bytes_normal) += static_cast<double>(e.bytes);
    }
    const double n = static_cast<double>(entries.size());
    const std::size_t normals = entries.size() - anomalies;
    json summary{{"schema_version", kSchemaVersion},
                 {"log_file", log_path.filename().string()},
                 {"labels_file", labels_path_for(log_path).filename().string()},
                 {"entries", entries.size()},
                 {"anomalies", anomalies},
                 {"realized_anomaly_rate", n > 0 ? static_cast<double>(anomalies) / n : 0.0},
                 {"injection_uris", injections},
                 {"mean_bytes_normal", normals ? bytes_normal / static_cast<double>(normals) : 0.0},
                 {"mean_bytes_anomaly", anomalies ? bytes_anomaly / static_cast<double>(anomalies) : 0.0},
                 {"config", resolved}};
    if (!entries.empty()) {
        summary["first_timestamp"] = format_timestamp(entries.front().timestamp);
        summary["last_timestamp"] = format_timestamp(entries.back().timestamp);
        summary["span_seconds"] = entries.back().timestamp - entries.front().timestamp;
    }
    write_json(fs::path(log_path.string() + ".summary.json"), summary);
    report << "generated " << entries.size() << " entries -> " << log_path.string() << '\n'
           << "  anomaly rate " << fixed(summary["realized_anomaly_rate"].get<double>(), 4) << ", "
           << injections << " injection URIs";
    if (!entries.empty()) report << ", span " << summary["span_seconds"].get<std::int64_t>() << " s";
    report << '\n';
    return summary;
}

// ---- train ------------------------------------------------------------------

json cmd_train(const RunConfig& config, const TrainOptions& options, std::ostream& report) {
    if (!is_agent_kind(options.agent)) {
        throw CommandError("unknown agent kind '" + options.agent + "' (expected logguardq, dqn or ppo)");
    }
    if (options.runs == 0) throw CommandError("--runs must be positive");
    const std::size_t episodes = options.episodes ? options.episodes : config.protocol.episodes;
    auto data = load_dataset(options.dataset, config);
    ensure_dir(options.out_dir);

    auto results = train_runs(options.agent, config, data, options.runs, episodes, config.protocol.jobs);
    json runs = json::array();
    std::vector<std::vector<EpisodeRecord>> sets;
    for (const auto& r : results) {
        const auto stem = options.agent + "_run" + std::to_string(r.run_index);
        std::ostringstream csv;
        write_episodes_csv(csv, r.records, config_comment(r.config));
        write_text(options.out_dir / (stem + ".csv"), csv.str());
        write_text(options.out_dir / (stem + ".policy"), r.policy);
        json run = metrics_json(summarize(r.records));
        run["run"] = r.run_index;
        run["env_seed"] = r.config.env.seed;
        run["agent_seed"] = r.config.agent.seed;
        runs.push_back(run);
        sets.push_back(r.records);
        report << options.agent << " run " << r.run_index << ": detection " << percent(run["detection_rate"])
               << "%, P " << fixed(run["precision"], 4) << ", R " << fixed(run["recall"], 4) << ", reward "
               << fixed(run["reward_mean"], 2) << " +- " << fixed(run["reward_sd"], 2) << '\n';
    }
    json summary{{"schema_version", kSchemaVersion},
                 {"agent", options.agent},
                 {"dataset", options.dataset.string()},
                 {"episodes", episodes},
                 {"runs", runs},
                 {"aggregate", aggregate_json(sets)},
                 {"config", config}};
    write_json(options.out_dir / (options.agent + "_summary.json"), summary);
    return summary;
}

// ---- compare ----------------------------------------------------------------

json cmd_compare(const RunConfig& config, const CompareOptions& options, std::ostream& report) {
    std::vector<std::string> agents;
    for (const auto& a : options.agents) {
        if (!is_agent_kind(a)) throw CommandError("unknown agent kind '" + a + "'");
        if (std::find(agents.begin(), agents.end(), a) == agents.end()) agents.push_back(a);
    }
    if (agents.size() < 2) throw CommandError("compare needs at least two distinct agents");
    ensure_dir(options.out_dir);

    std::map<std::string, std::vector<std::vector<EpisodeRecord>>> sets;
    for (const auto& agent : agents) {
        if (!options.from_dir.empty()) {
            sets[agent] = load_run_set(options.from_dir, agent);
        } else {
            TrainOptions t;
            t.agent = agent;
            t.dataset = options.dataset;
            t.out_dir = options.out_dir;
            t.episodes = options.episodes;
            t.runs = options.runs ? options.runs : config.protocol.runs;
            cmd_train(config, t, report);
            sets[agent] = load_run_set(options.out_dir, agent);
        }
    }
    const std::size_t episodes = sets[agents.front()].front().size();
    for (const auto& [agent, runs] : sets) {
        for (const auto& r : runs) {
            if (r.size() != episodes) {
                throw CommandError("mismatched episode counts: " + agent + " has a run with " +
                                   std::to_string(r.size()) + " episodes, expected " + std::to_string(episodes));
            }
        }
    }
    if (episodes == 0) throw CommandError("run sets contain no episodes");

    json table = json::object();
    std::map<std::string, std::vector<double>> rewards;
    for (const auto& agent : agents) {
        table[agent] = aggregate_json(sets[agent]);
        for (const auto& r : pooled(sets[agent])) rewards[agent].push_back(r.total_reward);
    }

    json tests = json::array();
    for (std::size_t i = 0; i < agents.size(); ++i) {
        for (std::size_t j = i + 1; j < agents.size(); ++j) {
            const auto res = mann_whitney_u(rewards[agents[i]], rewards[agents[j]]);
            tests.push_back({{"a", agents[i]},
                             {"b", agents[j]},
                             {"test", "mann_whitney_u"},
                             {"sample", "episode_reward"},
                             {"u", res.statistic},
                             {"z", res.z},
                             {"p_value", res.p_value},
                             {"significant", res.p_value < config.protocol.significance},
                             {"effect_size", "rank_biserial"},
                             {"r", res.effect_size},
                             {"label", std::string(to_string(res.label))}});
        }
    }

    // Curves: per-episode mean over runs, Savitzky-Golay smoothed.
    const std::size_t w = config.protocol.savgol_window, poly = config.protocol.savgol_poly;
    std::vector<double> index(episodes);
    for (std::size_t i = 0; i < episodes; ++i) index[i] = static_cast<double>(i);
    std::map<std::string, CurveTable> curves;
    for (const char* name : kCurveFiles) curves[name] = CurveTable{{"episode"}, {index}};
    auto add = [&](const char* file, const std::string& column, std::vector<double> values) {
        curves[file].columns.push_back(column);
        curves[file].values.push_back(smooth_curve(values, w, poly));
    };
    for (const auto& agent : agents) {
        std::vector<MetricsFrame> frames;
        for (const auto& r : sets[agent]) frames.push_back(build_metrics_frame(r));
        auto series = [&](auto member) {
            std::vector<std::vector<double>> per_run;
            for (const auto& f : frames) per_run.push_back(f.*member);
            return mean_over_runs(per_run);
        };
        add("curve_f1.csv", agent + "_f1", series(&MetricsFrame::f1));
        add("curve_variance.csv", agent + "_reward_variance_window100", series(&MetricsFrame::reward_variance_window));
        add("curve_variance.csv", agent + "_reward_variance_cumulative", series(&MetricsFrame::reward_variance));
        add("curve_reward.csv", agent + "_reward", series(&MetricsFrame::reward));
        for (std::size_t a = 0; a < kActionCount; ++a) {
            std::vector<std::vector<double>> per_run;
            for (const auto& f : frames) per_run.push_back(f.action_share[a]);
            add("curve_actions.csv", agent + "_" + std::string(to_string(action_from_index(a))),
                mean_over_runs(per_run));
        }
        add("curve_precision_recall.csv", agent + "_precision", series(&MetricsFrame::precision));
        add("curve_precision_recall.csv", agent + "_recall", series(&MetricsFrame::recall));
        add("curve_cumulative_detections.csv", agent + "_cumulative_tp", series(&MetricsFrame::cumulative_tp));
        add("curve_cumulative_detections.csv", agent + "_detection_rate", series(&MetricsFrame::detection_rate));
    }
    const auto comment = config_comment(config);
    for (const auto& [name, table_] : curves) write_curve_table(options.out_dir / name, table_, comment);

    json out{{"schema_version", kSchemaVersion},
             {"agents", agents},
             {"episodes", episodes},
             {"runs", sets[agents.front()].size()},
             {"significance", config.protocol.significance},
             {"metrics", table},
             {"tests", tests},
             {"curves", kCurveFiles},
             {"smoothing", {{"method", "savitzky_golay"}, {"window", w}, {"poly", poly}}},
             {"source", options.from_dir.empty() ? "trained" : options.from_dir.string()},
             {"config", config}};
    write_json(options.out_dir / "report.json", out);
    for (const auto& agent : agents) {
        const auto& m = table[agent];
        report << agent << ": detection " << percent(m["detection_rate_mean"]) << "%, F1 " << fixed(m["f1"], 4)
               << ", reward " << fixed(m["reward_mean"], 2) << " +- " << fixed(m["reward_sd"], 2) << '\n';
    }
    for (const auto& t : tests) {
        report << t["a"].get<std::string>() << " vs " << t["b"].get<std::string>() << ": U "
               << fixed(t["u"], 1) << ", p " << t["p_value"].get<double>() << ", r " << fixed(t["r"], 3) << " ("
               << t["label"].get<std::string>() << ")\n";
    }
    return out;
}

// ---- sensitivity ------------------------------------------------------------

json cmd_sensitivity(const RunConfig& config, const SensitivityOptions& options, std::ostream& report) {
    const auto& sc = config.sensitivity;
    if (sc.grid < 2) throw CommandError("degenerate sensitivity grid: need at least two points per axis");
    try {
        sc.validate();
    } catch (const std::invalid_argument& e) {
        throw CommandError(e.what());
    }
    auto data = load_dataset(options.dataset, config);
    ensure_dir(options.out_dir);

    const auto temps = linspace(sc.temperature_min, sc.temperature_max, sc.grid);
    const auto weights = linspace(sc.curiosity_min, sc.curiosity_max, sc.grid);
    const std::size_t g = sc.grid;
    std::vector<double> rates(g * g);
    parallel_for(g * g, config.protocol.jobs, [&](std::size_t cell) {
        RunConfig c = config;
        c.agent.initial_temperature = temps[cell / g];
        c.agent.min_temperature = std::min(c.agent.min_temperature, c.agent.initial_temperature);
        c.agent.curiosity_weight = weights[cell % g];
        // Every cell shares run seed 0, so differences come from the parameters.
        const auto resolved = resolve_run_config(c, 0);
        LogEnvironment env(data, resolved.env);
        LogGuardQAgent agent(resolved.agent);
        rates[cell] = detection_rate(run_training(agent, env, sc.episodes));
    });

    std::vector<double> d_temp(g, 0.0), d_curiosity(g, 0.0);
    for (std::size_t i = 0; i < g; ++i) {
        for (std::size_t j = 0; j < g; ++j) {
            d_temp[i] += rates[i * g + j] / static_cast<double>(g);
            d_curiosity[j] += rates[i * g + j] / static_cast<double>(g);
        }
    }
    auto index_json = [](std::span<const double> thetas, std::span<const double> d) {
        try {
            return json{{"s", sensitivity_index(thetas, d)}, {"marginal_detection_rate", d}};
        } catch (const std::invalid_argument& e) {
            return json{{"s", nullptr}, {"reason", e.what()}, {"marginal_detection_rate", d}};
        }
    };
    json cells = json::array();
    for (std::size_t cell = 0; cell < g * g; ++cell) {
        cells.push_back({{"initial_temperature", temps[cell / g]},
                         {"curiosity_weight", weights[cell % g]},
                         {"detection_rate", rates[cell]}});
    }
    json out{{"schema_version", kSchemaVersion},
             {"episodes_per_cell", sc.episodes},
             {"grid", g},
             {"cells", cells},
             {"initial_temperature", index_json(temps, d_temp)},
             {"curiosity_weight", index_json(weights, d_curiosity)},
             {"sigma_d", stability_sigma(rates)},
             {"config", config}};
    out["initial_temperature"]["values"] = temps;
    out["curiosity_weight"]["values"] = weights;
    write_json(options.out_dir / "sensitivity.json", out);

    for (const char* axis : {"initial_temperature", "curiosity_weight"}) {
        report << "S(" << axis << ") = ";
        if (out[axis]["s"].is_null()) {
            report << "undefined (" << out[axis]["reason"].get<std::string>() << ")\n";
        } else {
            report << fixed(out[axis]["s"], 4) << '\n';
        }
    }
    report << "sigma_D = " << fixed(out["sigma_d"], 4) << " over " << g * g << " cells\n";
    return out;
}

// ---- report -----------------------------------------------------------------

void cmd_report(const fs::path& dir, std::ostream& report) {
    std::vector<std::string> missing;
    if (!fs::exists(dir / "report.json")) missing.push_back("report.json");
    for (const char* name : kCurveFiles) {
        if (!fs::exists(dir / name)) missing.push_back(name);
    }
    if (!missing.empty()) {
        std::string list;
        for (const auto& m : missing) list += "\n  " + (dir / m).string();
        throw CommandError("report inputs missing:" + list);
    }
    const json rep = read_json(dir / "report.json");
    const auto agents = rep.at("agents").get<std::vector<std::string>>();

    std::ostringstream md;
    md << "# Comparison report\n\n";
    md << rep.at("episodes").get<std::size_t>() << " episodes x " << rep.at("runs").get<std::size_t>()
       << " runs per agent.\n\n";
    md << "| Model | Detection Rate (%) | Precision | Recall | F1-Score | Mean Reward (mu +- sigma) | Steps per Episode |\n";
    md << "|---|---|---|---|---|---|---|\n";
    for (const auto& agent : agents) {
        const auto& m = rep.at("metrics").at(agent);
        md << "| " << agent << " | " << percent(m.at("detection_rate_mean")) << " +- "
           << percent(m.at("detection_rate_sd")) << " | " << fixed(m.at("precision"), 4) << " | "
           << fixed(m.at("recall"), 4) << " | " << fixed(m.at("f1"), 4) << " | " << fixed(m.at("reward_mean"), 2)
           << " +- " << fixed(m.at("reward_sd"), 2) << " | " << fixed(m.at("steps_per_episode"), 1) << " |\n";
    }
    md << "\nDetection rate is the mean over runs (+- sample SD across runs). Precision, recall, F1 and reward "
          "pool all episodes of all runs.\n\n";
    md << "## Mann-Whitney U on episode rewards\n\n";
    md << "| A | B | U | z | p | significant (p < " << rep.at("significance").get<double>()
       << ") | rank-biserial r | effect |\n|---|---|---|---|---|---|---|---|\n";
    for (const auto& t : rep.at("tests")) {
        char p[32];
        std::snprintf(p, sizeof p, "%.3g", t.at("p_value").get<double>());
        md << "| " << t.at("a").get<std::string>() << " | " << t.at("b").get<std::string>() << " | "
           << fixed(t.at("u"), 1) << " | " << fixed(t.at("z"), 3) << " | " << p << " | "
           << (t.at("significant").get<bool>() ? "yes" : "no") << " | " << fixed(t.at("r"), 3) << " | "
           << t.at("label").get<std::string>() << " |\n";
    }

    struct Figure {
        const char* csv;
        const char* svg;
        const char* title;
        const char* y_label;
        const char* column_filter;  // substring; empty keeps all
    };
    const Figure figures[] = {
        {"curve_f1.csv", "fig_f1.svg", "Running F1 score", "F1", ""},
        {"curve_variance.csv", "fig_variance.svg", "Reward variance (last 100 episodes)", "variance", "window100"},
        {"curve_reward.csv", "fig_reward.svg", "Episode reward", "reward", ""},
        {"curve_actions.csv", "fig_actions.svg", "Action distribution", "share", ""},
        {"curve_precision_recall.csv", "fig_precision_recall.svg", "Running precision and recall", "value", ""},
        {"curve_cumulative_detections.csv", "fig_cumulative_detections.svg", "Cumulative true positives", "TP",
         "cumulative_tp"},
    };
    md << "\n## Figures\n\n";
    for (const auto& f : figures) {
        std::string svg;
        if (std::string_view(f.csv) == "curve_actions.csv") {
            std::vector<std::string> categories;
            for (std::size_t a = 0; a < kActionCount; ++a) categories.emplace_back(to_string(action_from_index(a)));
            std::vector<Series> series;
            for (const auto& agent : agents) {
                series.push_back({agent, rep.at("metrics").at(agent).at("action_share").get<std::vector<double>>()});
            }
            svg = svg_bar_chart(f.title, categories, series);
        } else {
            const auto table = read_curve_table(dir / f.csv);
            std::vector<Series> series;
            for (std::size_t c = 1; c < table.columns.size(); ++c) {
                if (*f.column_filter && table.columns[c].find(f.column_filter) == std::string::npos) continue;
                series.push_back({table.columns[c], table.values[c]});
            }
            svg = svg_line_chart(f.title, "episode", f.y_label, series);
        }
        write_text(dir / f.svg, svg);
        md << "![" << f.title << "](" << f.svg << ")\n\n";
    }
    md << "Curves are per-episode means over runs smoothed with a Savitzky-Golay filter (window "
       << rep.at("smoothing").at("window").get<std::size_t>() << ", degree "
       << rep.at("smoothing").at("poly").get<std::size_t>() << "); the action chart shows overall shares.\n\n";
    md << "## Configuration\n\n```json\n" << rep.at("config").dump(2) << "\n```\n";
    write_text(dir / "report.md", md.str());
    report << "wrote " << (dir / "report.md").string() << " and " << std::size(figures) << " figures\n";
}

}  // namespace logguard
