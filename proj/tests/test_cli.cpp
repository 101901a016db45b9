#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>

#include "logguard/commands.hpp"
#include "logguard/config.hpp"
#include "logguard/policy_io.hpp"
#include "logguard/training.hpp"

using namespace logguard;
using nlohmann::json;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) {
        std::random_device rd;
        path = fs::temp_directory_path() / ("logguard_" + name + "_" + std::to_string(rd()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

RunConfig small_config() {
    RunConfig c;
    c.seed = 7;
    c.loggen.total_entries = 3000;
    c.loggen.chunk_size = 1000;
    c.loggen.seed = 7;
    c.env.chunk_size = 1000;
    c.protocol.savgol_window = 21;
    c.protocol.jobs = 1;
    c.dqn.batch_size = 16;
    c.ppo.rollout_steps = 40;
    c.sensitivity.episodes = 30;
    return c;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(LOGGUARD_CLI) + " " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str());
}

}  // namespace

TEST_CASE("run config JSON round-trip") {
    RunConfig c = small_config();
    c.agent.exploration_mode = ExplorationMode::AdaptiveEps;
    c.agent.memory_mode = MemoryMode::GlobalCounts;
    c.agent.plasticity_mode = PlasticityMode::Variance;
    c.env.rewards.false_positive = -42.5;
    json j = c;
    RunConfig back = j.get<RunConfig>();
    CHECK(json(back) == j);
    CHECK(j["agent"]["exploration_mode"] == "adaptive_eps");
    CHECK(j["agent"]["memory_mode"] == "global_counts");
    CHECK(j["agent"]["plasticity_mode"] == "variance");

    RunConfig d;
    CHECK(json(d)["loggen"]["seed"].is_null());
    CHECK(json(json(d).get<RunConfig>()) == json(d));
}

TEST_CASE("run config rejects unknown keys and bad versions") {
    CHECK_THROWS(json::parse(R"({"sead": 1})").get<RunConfig>());
    CHECK_THROWS(json::parse(R"({"agent": {"temprature": 1.0}})").get<RunConfig>());
    CHECK_THROWS(json::parse(R"({"schema_version": 2})").get<RunConfig>());
    CHECK_THROWS(json::parse(R"({"agent": {"exploration_mode": "greedy"}})").get<RunConfig>());
    auto partial = json::parse(R"({"schema_version": 1, "seed": 5, "agent": {"initial_temperature": 1.1}})")
                       .get<RunConfig>();
    CHECK(partial.seed == 5);
    CHECK(partial.agent.initial_temperature == 1.1);
    CHECK(partial.agent.min_temperature == 0.6);

    TempDir dir("cfg");
    std::ofstream(dir.path / "bad.json") << "{ not json";
    CHECK_THROWS(load_run_config(dir.path / "bad.json"));
    CHECK_THROWS(load_run_config(dir.path / "missing.json"));
    std::ofstream(dir.path / "ok.json") << R"({"protocol": {"runs": 3}})";
    CHECK(load_run_config(dir.path / "ok.json").protocol.runs == 3);
}

TEST_CASE("config validation") {
    RunConfig c;
    c.protocol.savgol_window = 500;
    CHECK_THROWS(c.validate());
    c = RunConfig{};
    c.protocol.significance = 0.0;
    CHECK_THROWS(c.validate());
    c = RunConfig{};
    c.sensitivity.temperature_min = 1.5;
    CHECK_THROWS(c.validate());
    CHECK_NOTHROW(RunConfig{}.validate());
}

TEST_CASE("policy text round-trip") {
    PolicyRecord r{"logguardq", "bounded", json{{"a", 1}}, {0.1, -2.5e-300, 1.0 / 3.0, 0.0}};
    std::stringstream ss;
    write_policy(ss, r);
    auto back = read_policy(ss);
    CHECK(back.kind == r.kind);
    CHECK(back.tag == r.tag);
    CHECK(back.config == r.config);
    CHECK(back.params == r.params);
    std::stringstream bad("logguard-policy 2\n");
    CHECK_THROWS(read_policy(bad));
    std::stringstream truncated("logguard-policy 1\nkind dqn\ntag mlp\nconfig {}\nparams 3\n1\n2\n");
    CHECK_THROWS(read_policy(truncated));
}

TEST_CASE("parallel_for covers every index and propagates errors") {
    std::vector<int> hits(37, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
    CHECK_THROWS(parallel_for(5, 2, [](std::size_t i) {
        if (i == 3) throw std::runtime_error("boom");
    }));
}

TEST_CASE("train_runs does not depend on the job count") {
    RunConfig c = small_config();
    std::ostringstream sink;
    TempDir dir("jobs");
    cmd_generate(c, dir.path / "a.log", sink);
    auto data = load_dataset(dir.path / "a.log", c);
    auto one = train_runs("logguardq", c, data, 3, 20, 1);
    auto many = train_runs("logguardq", c, data, 3, 20, 3);
    REQUIRE(one.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(one[i].records == many[i].records);
        CHECK(one[i].policy == many[i].policy);
    }
    CHECK(one[0].records != one[1].records);
}

TEST_CASE("commands end to end") {
    TempDir dir("e2e");
    RunConfig c = small_config();
    std::ostringstream sink;
    const auto log = dir.path / "data" / "access.log";

    auto gen = cmd_generate(c, log, sink);
    CHECK(fs::exists(log));
    CHECK(fs::exists(labels_path_for(log)));
    CHECK(fs::exists(fs::path(log.string() + ".summary.json")));
    CHECK(gen["entries"] == 3000);

    TrainOptions t;
    t.agent = "ppo";
    t.dataset = log;
    t.out_dir = dir.path / "train";
    t.episodes = 25;
    t.runs = 2;
    auto summary = cmd_train(c, t, sink);
    CHECK(summary["runs"].size() == 2);
    for (int k = 0; k < 2; ++k) {
        const auto csv = t.out_dir / ("ppo_run" + std::to_string(k) + ".csv");
        REQUIRE(fs::exists(csv));
        CHECK(read_episodes_csv(csv).size() == 25);
        auto policy = read_policy(t.out_dir / ("ppo_run" + std::to_string(k) + ".policy"));
        CHECK(policy.kind == "ppo");
    }
    t.agent = "sarsa";
    CHECK_THROWS_AS(cmd_train(c, t, sink), CommandError);
    t.agent = "dqn";
    t.dataset = dir.path / "nope.log";
    CHECK_THROWS_AS(cmd_train(c, t, sink), CommandError);

    CompareOptions co;
    co.dataset = log;
    co.out_dir = dir.path / "cmp";
    co.episodes = 40;
    co.runs = 2;
    auto rep = cmd_compare(c, co, sink);
    CHECK(rep["tests"].size() == 3);
    for (const auto& test : rep["tests"]) {
        CHECK(test["p_value"].get<double>() >= 0.0);
        CHECK(test["p_value"].get<double>() <= 1.0);
    }
    for (const char* name : kCurveFiles) {
        auto table = read_curve_table(co.out_dir / name);
        CHECK(table.columns.front() == "episode");
        CHECK(table.values.front().size() == 40);
    }

    cmd_report(co.out_dir, sink);
    const auto md1 = slurp(co.out_dir / "report.md");
    const auto svg1 = slurp(co.out_dir / "fig_f1.svg");
    CHECK(md1.find("| logguardq |") != std::string::npos);
    CHECK(svg1.rfind("<svg", 0) == 0);
    cmd_report(co.out_dir, sink);
    CHECK(slurp(co.out_dir / "report.md") == md1);
    CHECK(slurp(co.out_dir / "fig_f1.svg") == svg1);

    // Re-analysis from saved runs reproduces the trained comparison.
    CompareOptions again = co;
    again.from_dir = co.out_dir;
    again.out_dir = dir.path / "cmp2";
    auto rep2 = cmd_compare(c, again, sink);
    CHECK(rep2["tests"] == rep["tests"]);
    CHECK(rep2["metrics"] == rep["metrics"]);

    // Mismatched episode counts are rejected.
    TrainOptions shorter;
    shorter.agent = "dqn";
    shorter.dataset = log;
    shorter.out_dir = dir.path / "mixed";
    shorter.episodes = 10;
    cmd_train(c, shorter, sink);
    shorter.agent = "ppo";
    shorter.episodes = 12;
    cmd_train(c, shorter, sink);
    CompareOptions mixed;
    mixed.agents = {"dqn", "ppo"};
    mixed.from_dir = dir.path / "mixed";
    mixed.out_dir = dir.path / "mixed_out";
    CHECK_THROWS_WITH_AS(cmd_compare(c, mixed, sink), doctest::Contains("mismatched episode counts"), CommandError);

    fs::remove(co.out_dir / "curve_reward.csv");
    CHECK_THROWS_WITH_AS(cmd_report(co.out_dir, sink), doctest::Contains("curve_reward.csv"), CommandError);

    SensitivityOptions so{log, dir.path / "sens"};
    auto sens = cmd_sensitivity(c, so, sink);
    CHECK(sens["cells"].size() == 9);
    CHECK(sens["sigma_d"].get<double>() >= 0.0);
    for (const char* axis : {"initial_temperature", "curiosity_weight"}) {
        CHECK((sens[axis]["s"].is_number() || sens[axis].contains("reason")));
    }
    RunConfig flat = c;
    flat.sensitivity.grid = 1;
    CHECK_THROWS_AS(cmd_sensitivity(flat, so, sink), CommandError);
}

TEST_CASE("cli binary") {
    TempDir dir("bin");
    const auto p = dir.path.string();
    CHECK(run_cli("generate --entries 2000 --chunk-size 1000 --seed 3 --out " + p + "/a.log") == 0);
    CHECK(run_cli("generate --entries 2000 --chunk-size 1000 --seed 3 --out " + p + "/b.log") == 0);
    CHECK(slurp(p + "/a.log") == slurp(p + "/b.log"));
    CHECK(slurp(p + "/a.log.labels.csv") == slurp(p + "/b.log.labels.csv"));
    CHECK(run_cli("generate --entries 2000 --anomaly-rate 1.5 --out " + p + "/c.log") != 0);
    CHECK(run_cli("train --agent sarsa --data " + p + "/a.log --out " + p) != 0);
    CHECK(run_cli("train --agent logguardq --episodes 10 --data " + p + "/a.log --out " + p + "/t") == 0);
    CHECK(fs::exists(p + "/t/logguardq_run0.csv"));
    CHECK(run_cli("report --dir " + p + "/empty") != 0);
    CHECK(run_cli("frobnicate") != 0);
    std::ofstream(p + "/cfg.json") << R"({"protocol": {"episodez": 3}})";
    CHECK(run_cli("train --config " + p + "/cfg.json --data " + p + "/a.log --out " + p) != 0);
}
