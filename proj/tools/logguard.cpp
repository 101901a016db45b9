// Command-line front end: generate, train, compare, sensitivity, report.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "logguard/commands.hpp"
#include "logguard/config.hpp"
#include "logguard/training.hpp"

using namespace logguard;

namespace {

struct Common {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> jobs;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON run config");
        cmd->add_option("--seed", seed, "global seed (overrides the config)");
        cmd->add_option("--jobs", jobs, "parallel runs (0 = all cores)");
    }

    RunConfig resolve() const {
        RunConfig c = config_path.empty() ? RunConfig{} : load_run_config(config_path);
        if (seed) {
            c.seed = *seed;
            c.loggen.seed = *seed;
        }
        if (jobs) c.protocol.jobs = *jobs;
        c.validate();
        return c;
    }
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Log anomaly detection with reinforcement learning agents"};
    app.require_subcommand(1);

    // generate
    Common gen_common;
    std::string gen_out = "data/access.log";
    std::optional<std::size_t> entries, chunk_size;
    std::optional<double> anomaly_rate, attack_rate;
    auto* gen = app.add_subcommand("generate", "write a synthetic labeled access log");
    gen_common.attach(gen);
    gen->add_option("--entries", entries, "number of log lines");
    gen->add_option("--anomaly-rate", anomaly_rate, "fraction of anomalous lines");
    gen->add_option("--attack-rate", attack_rate, "fraction of anomalies with injection URIs");
    gen->add_option("--chunk-size", chunk_size, "entries per generation chunk");
    gen->add_option("--out", gen_out, "output log path (labels go to <out>.labels.csv)");

    // train
    Common train_common;
    TrainOptions train_opts;
    std::string train_data, train_out = "out";
    auto* train = app.add_subcommand("train", "train one agent kind and write per-episode metrics");
    train_common.attach(train);
    train->add_option("--agent", train_opts.agent, "logguardq, dqn or ppo");
    train->add_option("--data", train_data, "log file from generate (default: config dataset)");
    train->add_option("--episodes", train_opts.episodes, "episodes per run (default: protocol.episodes)");
    train->add_option("--runs", train_opts.runs, "independent runs");
    train->add_option("--out", train_out, "output directory");

    // compare
    Common cmp_common;
    CompareOptions cmp_opts;
    std::string cmp_agents = "logguardq,dqn,ppo", cmp_data, cmp_out = "out", cmp_from;
    auto* cmp = app.add_subcommand("compare", "train or load run sets and compare them statistically");
    cmp_common.attach(cmp);
    cmp->add_option("--agents", cmp_agents, "comma-separated agent kinds");
    cmp->add_option("--data", cmp_data, "log file (when training)");
    cmp->add_option("--from", cmp_from, "directory with existing <agent>_run<k>.csv files");
    cmp->add_option("--episodes", cmp_opts.episodes, "episodes per run (default: protocol.episodes)");
    cmp->add_option("--runs", cmp_opts.runs, "runs per agent (default: protocol.runs)");
    cmp->add_option("--out", cmp_out, "output directory");

    // sensitivity
    Common sens_common;
    std::string sens_data, sens_out = "out";
    std::optional<std::size_t> sens_episodes, sens_grid;
    auto* sens = app.add_subcommand("sensitivity", "sweep initial temperature and curiosity weight");
    sens_common.attach(sens);
    sens->add_option("--data", sens_data, "log file");
    sens->add_option("--episodes", sens_episodes, "episodes per grid cell");
    sens->add_option("--grid", sens_grid, "points per axis");
    sens->add_option("--out", sens_out, "output directory");

    // report
    std::string report_dir = "out";
    auto* rep = app.add_subcommand("report", "render markdown and SVG figures from compare output");
    rep->add_option("--dir", report_dir, "compare output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            RunConfig c = gen_common.resolve();
            if (entries) c.loggen.total_entries = *entries;
            if (anomaly_rate) c.loggen.anomaly_rate = *anomaly_rate;
            if (attack_rate) c.loggen.attack_rate = *attack_rate;
            if (chunk_size) c.loggen.chunk_size = *chunk_size;
            cmd_generate(c, gen_out, std::cout);
        } else if (*train) {
            RunConfig c = train_common.resolve();
            train_opts.dataset = train_data.empty() ? c.dataset : train_data;
            train_opts.out_dir = train_out;
            cmd_train(c, train_opts, std::cout);
        } else if (*cmp) {
            RunConfig c = cmp_common.resolve();
            cmp_opts.agents = split_list(cmp_agents);
            cmp_opts.dataset = cmp_data.empty() ? c.dataset : cmp_data;
            cmp_opts.out_dir = cmp_out;
            cmp_opts.from_dir = cmp_from;
            cmd_compare(c, cmp_opts, std::cout);
        } else if (*sens) {
            RunConfig c = sens_common.resolve();
            if (sens_episodes) c.sensitivity.episodes = *sens_episodes;
            if (sens_grid) c.sensitivity.grid = *sens_grid;
            SensitivityOptions o;
            o.dataset = sens_data.empty() ? c.dataset : sens_data;
            o.out_dir = sens_out;
            cmd_sensitivity(c, o, std::cout);
        } else if (*rep) {
            cmd_report(report_dir, std::cout);
        }
    } catch (const std::exception& e) {
        std::cerr << "logguard: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
