#include <doctest.h>

#include <cmath>
#include <map>
#include <memory>
#include <set>

#include "logguard/env.hpp"
#include "logguard/loggen.hpp"

using namespace logguard;

namespace {

LogEntry entry(const std::string& ip, int status, const std::string& uri = "/index.html", std::uint64_t bytes = 1000,
               const std::string& ua = "Mozilla/5.0") {
    LogEntry e;
    e.ip = ip;
    e.status = status;
    e.uri = uri;
    e.bytes = bytes;
    e.user_agent = ua;
    e.label = label_entry(e);
    return e;
}

std::shared_ptr<const Dataset> make_data(std::size_t n, std::size_t chunk, double rate = 0.479, std::uint64_t seed = 3) {
    GenConfig g;
    g.total_entries = n;
    g.chunk_size = std::min(n, chunk);
    g.anomaly_rate = rate;
    g.seed = seed;
    return std::make_shared<const Dataset>(generate_dataset(g, EntryProfile::defaults()), chunk);
}

EnvConfig quiet(std::uint64_t seed = 1) {
    EnvConfig c;
    c.noise_enabled = false;
    c.seed = seed;
    return c;
}

}  // namespace

TEST_CASE("build_state follows the normalization formulas") {
    ShortTermMemory mem;
    for (int i = 0; i < 50; ++i) mem.push("1.1.1.1");
    for (int i = 0; i < 50; ++i) mem.push("2.2.2.2");
    auto s = build_state(entry("1.1.1.1", 200, std::string(100, 'a'), 10000), mem);
    CHECK(s.ip_freq == doctest::Approx(0.5));
    CHECK(s.uri_len_norm == doctest::Approx(1.0));
    CHECK(s.bytes_norm == doctest::Approx(1.0));
    CHECK(s.status_feature == 0.0);
    CHECK(s.suspicious_ua == 0.0);
    CHECK(build_state(entry("9.9.9.9", 418), mem).status_feature == 3.0);
    CHECK(build_state(entry("9.9.9.9", 401), mem).status_feature == 1.0);
    CHECK(build_state(entry("9.9.9.9", 403), mem).status_feature == 2.0);
    CHECK(build_state(entry("9.9.9.9", 500), mem).status_feature == 3.0);
    CHECK(build_state(entry("9.9.9.9", 200, "/", 1, "curl/8"), mem).suspicious_ua == 1.0);
}

TEST_CASE("short-term memory is a bounded FIFO") {
    ShortTermMemory mem;
    for (int i = 0; i < 101; ++i) mem.push("ip" + std::to_string(i));
    CHECK(mem.size() == 100);
    CHECK(mem.count("ip0") == 0);
    CHECK(mem.count("ip100") == 1);
    CHECK(mem.contents().front() == "ip1");
    for (int i = 0; i < 300; ++i) mem.push("x");
    CHECK(mem.frequency("x") == doctest::Approx(1.0));
    CHECK(mem.size() == 100);
}

TEST_CASE("outcome classification table") {
    CHECK(classify_outcome(Action::Malicious, true) == Outcome::TruePositive);
    CHECK(classify_outcome(Action::Malicious, false) == Outcome::FalsePositive);
    CHECK(classify_outcome(Action::Benign, true) == Outcome::FalseNegative);
    CHECK(classify_outcome(Action::Benign, false) == Outcome::TrueNegative);
    CHECK(classify_outcome(Action::Ignore, true) == Outcome::FalseNegative);
    CHECK(classify_outcome(Action::Ignore, false) == Outcome::Neutral);
    CHECK(classify_outcome(Action::Investigate, true) == Outcome::Neutral);
    CHECK(classify_outcome(Action::Investigate, false) == Outcome::Neutral);
}

TEST_CASE("reward table") {
    RewardTable r;
    CHECK(r.base_reward(Action::Malicious, true) == 10.0);
    CHECK(r.base_reward(Action::Malicious, false) == -60.0);
    CHECK(r.base_reward(Action::Benign, true) == -5.0);
    CHECK(r.base_reward(Action::Benign, false) == 2.0);
    CHECK(r.base_reward(Action::Investigate, true) == 5.0);
    CHECK(r.base_reward(Action::Investigate, false) == -1.0);
    CHECK(r.base_reward(Action::Ignore, true) == -5.0);
    CHECK(r.base_reward(Action::Ignore, false) == 0.0);
}

TEST_CASE("noise-free steps pay table rewards and end on the fifth step") {
    std::vector<LogEntry> v;
    for (int i = 0; i < 20; ++i) v.push_back(entry("10.0.0." + std::to_string(i), i % 2 ? 401 : 200));
    auto data = std::make_shared<const Dataset>(v, 20);
    LogEnvironment env(data, quiet());
    const std::set<double> table{10, -60, -5, 2, 5, -1, 0};
    for (int ep = 0; ep < 50; ++ep) {
        auto obs = env.reset();
        CHECK(env.steps() == 0);
        CHECK_FALSE(env.done());
        REQUIRE(obs.entry != nullptr);
        int steps = 0;
        while (true) {
            const bool anomalous = *obs.entry->label;
            auto res = env.step(Action::Malicious);
            ++steps;
            CHECK(res.reward == (anomalous ? 10.0 : -60.0));
            CHECK(res.outcome == (anomalous ? Outcome::TruePositive : Outcome::FalsePositive));
            CHECK(table.count(res.base_reward) == 1);
            if (res.done) break;
            obs = res.next;
        }
        CHECK(steps == 5);
        CHECK_THROWS_AS(env.step(Action::Benign), std::logic_error);
    }
}

TEST_CASE("benign on normal pays the TN reward") {
    std::vector<LogEntry> v(10, entry("10.0.0.1", 200));
    LogEnvironment env(std::make_shared<const Dataset>(v, 10), quiet());
    env.reset();
    auto res = env.step(Action::Benign);
    CHECK(res.reward == 2.0);
    CHECK(res.outcome == Outcome::TrueNegative);
}

TEST_CASE("single-chunk dataset always resets into that chunk") {
    LogEnvironment env(make_data(1000, 1000), quiet());
    for (int i = 0; i < 100; ++i) {
        env.reset();
        CHECK(env.current_chunk() == 0);
    }
}

TEST_CASE("chunk choice is uniform") {
    LogEnvironment env(make_data(10'000, 1000), quiet(7));
    std::map<std::size_t, int> hits;
    const int n = 10'000;
    for (int i = 0; i < n; ++i) {
        env.reset();
        ++hits[env.current_chunk()];
    }
    REQUIRE(hits.size() == 10);
    double chi2 = 0.0;
    for (auto [chunk, h] : hits) {
        CHECK(static_cast<double>(h) / n == doctest::Approx(0.1).epsilon(0.2));
        chi2 += (h - 1000.0) * (h - 1000.0) / 1000.0;
    }
    CHECK(chi2 < 27.88);  // 9 dof, p = 0.001
}

TEST_CASE("reward noise has the configured spread") {
    EnvConfig c;
    c.seed = 4;
    LogEnvironment env(make_data(5000, 5000), c);
    std::vector<double> diffs;
    while (diffs.size() < 10'000) {
        env.reset();
        bool done = false;
        while (!done) {
            auto res = env.step(Action::Investigate);
            diffs.push_back(res.reward - res.base_reward);
            done = res.done;
        }
    }
    double mean = 0.0, ss = 0.0;
    for (double d : diffs) mean += d;
    mean /= static_cast<double>(diffs.size());
    for (double d : diffs) ss += (d - mean) * (d - mean);
    const double sd = std::sqrt(ss / static_cast<double>(diffs.size() - 1));
    CHECK(std::abs(mean) < 0.005);
    CHECK(sd == doctest::Approx(0.05).epsilon(0.2));
}

TEST_CASE("episode bookkeeping partitions steps") {
    LogEnvironment env(make_data(3000, 1000), quiet(2));
    std::mt19937_64 rng(3);
    for (int ep = 0; ep < 200; ++ep) {
        env.reset();
        std::map<Outcome, int> counts;
        int steps = 0;
        bool done = false;
        while (!done) {
            auto res = env.step(action_from_index(rng() % 4));
            ++counts[res.outcome];
            ++steps;
            done = res.done;
            CHECK(env.short_term().size() <= 100);
            CHECK(res.next.state.ip_freq >= 0.0);
            CHECK(res.next.state.ip_freq <= 1.0);
        }
        int total = 0;
        for (auto [o, c] : counts) total += c;
        CHECK(total == steps);
        CHECK(steps <= 5);
    }
}

TEST_CASE("short final chunk ends the episode at the chunk end") {
    std::vector<LogEntry> v;
    for (int i = 0; i < 13; ++i) v.push_back(entry("10.0.0.1", 200));
    auto data = std::make_shared<const Dataset>(v, 10);  // chunks of 10 and 3
    LogEnvironment env(data, quiet(9));
    bool saw_short = false;
    for (int ep = 0; ep < 200; ++ep) {
        env.reset();
        int steps = 0;
        bool done = false;
        while (!done) {
            done = env.step(Action::Benign).done;
            ++steps;
        }
        if (env.current_chunk() == 1) {
            saw_short = true;
            CHECK(steps <= 3);
        } else {
            CHECK(steps == 5);
        }
    }
    CHECK(saw_short);
}

TEST_CASE("environment rejects bad inputs") {
    EnvConfig c;
    c.max_steps = 0;
    CHECK_THROWS(c.validate());
    c = EnvConfig{};
    c.noise_sd = -1.0;
    CHECK_THROWS(c.validate());
    CHECK_THROWS(LogEnvironment(nullptr, EnvConfig{}));
    LogEnvironment empty(std::make_shared<const Dataset>(std::vector<LogEntry>{}, 10), EnvConfig{});
    CHECK_THROWS(empty.reset());
    CHECK_THROWS(action_from_index(4));
}
