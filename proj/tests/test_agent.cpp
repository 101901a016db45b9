#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "logguard/config.hpp"
#include "logguard/loggen.hpp"
#include "logguard/logguardq.hpp"
#include "logguard/metrics.hpp"
#include "logguard/policy_io.hpp"
#include "logguard/training.hpp"

using namespace logguard;

TEST_CASE("softmax examples") {
    auto p = softmax_probabilities({0.0, 0.0, 0.0, 0.0}, 1.0);
    for (double v : p) CHECK(v == doctest::Approx(0.25));
    p = softmax_probabilities({1.0, 0.0, 0.0, 0.0}, 1.0);
    CHECK(p[0] == doctest::Approx(std::exp(1.0) / (std::exp(1.0) + 3.0)));
    CHECK(p[0] == doctest::Approx(0.4754).epsilon(1e-4));
    p = softmax_probabilities({1.0, 0.5, 0.0, -1.0}, 1e-4);
    CHECK(p[0] == doctest::Approx(1.0));
    CHECK_THROWS(softmax_probabilities({0, 0, 0, 0}, 0.0));
    CHECK_THROWS(softmax_probabilities({0, 0, 0, 0}, -1.0));
}

TEST_CASE("softmax properties") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n(0.0, 20.0);
    for (int i = 0; i < 1000; ++i) {
        std::array<double, 4> q{n(rng), n(rng), n(rng), n(rng)};
        const double t = 0.1 + (rng() % 100) / 50.0;
        auto p = softmax_probabilities(q, t);
        double sum = 0.0;
        for (double v : p) {
            CHECK(v > 0.0);
            sum += v;
        }
        CHECK(std::abs(sum - 1.0) < 1e-12);
        const double c = n(rng);
        auto shifted = softmax_probabilities({q[0] + c, q[1] + c, q[2] + c, q[3] + c}, t);
        for (int k = 0; k < 4; ++k) CHECK(shifted[k] == doctest::Approx(p[k]).epsilon(1e-9));
    }
}

TEST_CASE("select_action samples from the softmax") {
    WeightMatrix w;
    w.at(0, 0) = 1.0;
    StateVector s;
    s.ip_freq = 1.0;
    std::mt19937_64 rng(2);
    int hits = 0;
    const int n = 40'000;
    for (int i = 0; i < n; ++i) hits += select_action(s, w, 1.0, rng) == Action::Malicious;
    CHECK(static_cast<double>(hits) / n == doctest::Approx(0.4754).epsilon(0.02));
}

TEST_CASE("temperature schedule") {
    AgentConfig c;
    CHECK(temperature_at(0, c) == 1.0);
    CHECK(temperature_at(1, c) == doctest::Approx(0.9995));
    CHECK(temperature_at(1'000'000, c) == 0.6);
    double prev = 2.0;
    for (std::size_t e = 0; e < 5000; e += 7) {
        double t = temperature_at(e, c);
        CHECK(t <= prev);
        CHECK(t >= 0.6);
        prev = t;
    }
}

TEST_CASE("curiosity bonus") {
    CHECK(curiosity_bonus(0) == 1.0);
    CHECK(curiosity_bonus(3) == 0.5);
    CHECK(curiosity_bonus(99) == doctest::Approx(0.1));
    for (std::uint64_t n = 0; n < 1000; ++n) {
        CHECK(curiosity_bonus(n) * std::sqrt(static_cast<double>(n) + 1.0) == doctest::Approx(1.0));
        CHECK(curiosity_bonus(n + 1) < curiosity_bonus(n));
    }
}

TEST_CASE("shape_reward applies penalty and curiosity") {
    AgentConfig c;
    c.penalty_prob = 0.0;
    std::mt19937_64 rng(1);
    CHECK(shape_reward(10.0, 0, rng, c) == doctest::Approx(11.0));
    c.penalty_prob = 1.0;
    CHECK(shape_reward(10.0, 0, rng, c) == doctest::Approx(10.5));
    c.curiosity_enabled = false;
    CHECK(shape_reward(10.0, 0, rng, c) == doctest::Approx(9.5));
    c.penalty_prob = 0.0;
    CHECK(shape_reward(10.0, 5, rng, c) == 10.0);
    c.curiosity_enabled = true;
    c.curiosity_weight = 0.5;
    CHECK(shape_reward(10.0, 3, rng, c) == doctest::Approx(10.25));

    c = AgentConfig{};
    c.curiosity_enabled = false;
    int fired = 0;
    for (int i = 0; i < 20'000; ++i) fired += shape_reward(0.0, 0, rng, c) < 0.0;
    CHECK(fired / 20'000.0 == doctest::Approx(0.05).epsilon(0.15));
}

TEST_CASE("learning rate modes") {
    AgentConfig c;
    CHECK(learning_rate_at(0, 0.0, c) == 0.02);
    CHECK(learning_rate_at(100'000, 0.0, c) == 0.001);
    double prev = 1.0;
    for (std::size_t e = 0; e < 6000; e += 11) {
        double eta = learning_rate_at(e, 0.0, c);
        CHECK(eta <= prev);
        CHECK(eta >= 0.001);
        prev = eta;
    }
    c.plasticity_mode = PlasticityMode::Variance;
    CHECK(learning_rate_at(0, 0.0, c) == 0.02);
    CHECK(learning_rate_at(0, 10.0, c) == doctest::Approx(0.04));
    CHECK(learning_rate_at(0, 20.0, c) > learning_rate_at(0, 10.0, c));
    CHECK_THROWS(learning_rate_at(0, -1.0, c));
}

TEST_CASE("epsilon schedules") {
    CHECK(epsilon_at(0) == doctest::Approx(0.1));
    CHECK(epsilon_at(1000) == doctest::Approx(0.1 * std::exp(-1.0)));
    CHECK(epsilon_at(1000) == doctest::Approx(0.03679).epsilon(1e-4));
    CHECK(epsilon_at(1'000'000) == 0.01);
    CHECK(adaptive_epsilon(0, 5.0, 0.0) == 1.0);
    CHECK(adaptive_epsilon(1'000'000, 5.0, 3.0) == 0.01);
    CHECK(adaptive_epsilon(1000, 4.0, 4.0) == doctest::Approx(2.0 * std::exp(-1.0)));
    CHECK(adaptive_epsilon(1000, -4.0, 4.0) == doctest::Approx(0.7358).epsilon(1e-4));
    CHECK(adaptive_epsilon(10, 0.0, 3.0) == 0.01);
}

TEST_CASE("td_update examples") {
    WeightMatrix w;
    StateVector s;
    s.ip_freq = 1.0;
    auto r = td_update(w, s, Action::Benign, 10.0, StateVector{}, 0.02, 0.99);
    CHECK(r.delta == doctest::Approx(10.0));
    CHECK(w.at(0, 1) == doctest::Approx(0.2));
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t a = 0; a < 4; ++a) {
            if (!(i == 0 && a == 1)) CHECK(w.at(i, a) == 0.0);
        }
    }
    // zero state leaves weights unchanged
    WeightMatrix before = w;
    td_update(w, StateVector{}, Action::Malicious, 5.0, s, 0.02, 0.99);
    CHECK(w == before);
    // delta = 0: reward matches prediction including the bootstrap term
    WeightMatrix z;
    z.at(0, 2) = 3.0;
    const double reward = 3.0 - 0.99 * 3.0;
    before = z;
    auto r0 = td_update(z, s, Action::Investigate, reward, s, 0.5, 0.99);
    CHECK(std::abs(r0.delta) < 1e-12);
    CHECK(z == before);
    CHECK_THROWS(td_update(z, s, Action::Benign, std::nan(""), s, 0.1, 0.99));
    CHECK_THROWS(td_update(z, s, Action::Benign, 1.0, s, 0.0, 0.99));
}

TEST_CASE("td increments touch one column and invert") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        auto w = WeightMatrix::random_normal(0.5, rng);
        const auto original = w;
        StateVector s{std::abs(n(rng)), 1.0, n(rng), n(rng), 1.0};
        const auto a = action_from_index(rng() % 4);
        const double eta = 0.01 + std::abs(n(rng)), delta = n(rng);
        apply_td_increment(w, s, a, eta, delta);
        for (std::size_t r = 0; r < 5; ++r) {
            for (std::size_t c = 0; c < 4; ++c) {
                if (c != index_of(a)) CHECK(w.at(r, c) == original.at(r, c));
            }
        }
        apply_td_increment(w, s, a, -eta, delta);
        for (std::size_t k = 0; k < 20; ++k) CHECK(std::abs(w.values()[k] - original.values()[k]) < 1e-12);
    }
}

TEST_CASE("dual memory statistics match batch recomputation") {
    DualMemory m;
    std::mt19937_64 rng(8);
    std::normal_distribution<double> n(5.0, 30.0);
    for (int i = 0; i < 1000; ++i) {
        m.update("10.0.0." + std::to_string(rng() % 7), n(rng));
        CHECK(m.short_term.size() <= 100);
        CHECK(m.long_term.size() <= 100);
        std::vector<double> v(m.long_term.contents().begin(), m.long_term.contents().end());
        auto s = reward_stats(v);
        CHECK(std::abs(s.mean - m.long_term.mean()) < 1e-9);
        CHECK(std::abs(s.variance - m.long_term.variance()) < 1e-9);
    }
    RewardMemory r;
    for (double x : {2.0, 2.0, 2.0}) r.push(x);
    CHECK(r.mean() == 2.0);
    CHECK(r.variance() == 0.0);
    RewardMemory t;
    t.push(0.0);
    t.push(10.0);
    CHECK(t.mean() == 5.0);
    CHECK(t.variance() == 25.0);
    RewardMemory small(3);
    for (double x : {1.0, 2.0, 3.0, 4.0}) small.push(x);
    CHECK(small.contents().front() == 2.0);
}

TEST_CASE("state keys round to three decimals") {
    StateVector a{0.5, 1.0, 0.12, 0.3, 0.0};
    StateVector b = a;
    b.ip_freq += 1e-6;
    CHECK(state_key(a) == state_key(b));
    b.suspicious_ua = 1.0;
    CHECK_FALSE(state_key(a) == state_key(b));
    VisitCounter v;
    CHECK(v.visit(state_key(a)) == 1);
    CHECK(v.visit(state_key(StateVector{0.5 + 1e-6, 1.0, 0.12, 0.3, 0.0})) == 2);
}

TEST_CASE("agent config validation") {
    AgentConfig c;
    CHECK_NOTHROW(c.validate());
    c.gamma = 1.0;
    CHECK_THROWS(c.validate());
    c = AgentConfig{};
    c.temperature_decay = 1.5;
    CHECK_THROWS(c.validate());
    c = AgentConfig{};
    c.min_temperature = 2.0;
    CHECK_THROWS(c.validate());
}

TEST_CASE("LogGuardQ trains with finite weights and serializes its policy") {
    GenConfig g;
    g.total_entries = 5000;
    g.chunk_size = 5000;
    g.seed = 12;
    auto data = std::make_shared<const Dataset>(generate_dataset(g, EntryProfile::defaults()), 5000);
    for (auto mode : {MemoryMode::Bounded, MemoryMode::GlobalCounts}) {
        for (auto plasticity : {PlasticityMode::Schedule, PlasticityMode::Variance}) {
            for (auto exploration : {ExplorationMode::Softmax, ExplorationMode::EpsGreedy, ExplorationMode::AdaptiveEps}) {
                RunConfig cfg;
                cfg.agent.memory_mode = mode;
                cfg.agent.plasticity_mode = plasticity;
                cfg.agent.exploration_mode = exploration;
                auto resolved = resolve_run_config(cfg, 0);
                LogEnvironment env(data, resolved.env);
                LogGuardQAgent agent(resolved.agent);
                auto records = run_training(agent, env, 300);
                CHECK(records.size() == 300);
                CHECK(agent.weights().all_finite());
                CHECK(agent.q_deltas().size() == 1500);
                std::ostringstream out;
                agent.save_policy(out);
                std::istringstream in(out.str());
                auto rec = read_policy(in);
                CHECK(rec.kind == "logguardq");
                CHECK(rec.tag == to_string(mode));
                REQUIRE(rec.params.size() == 20);
                for (std::size_t k = 0; k < 20; ++k) CHECK(rec.params[k] == agent.weights().values()[k]);
                CHECK(rec.config.get<AgentConfig>().memory_mode == mode);
            }
        }
    }
}

TEST_CASE("global-count memory clamps ip frequency") {
    AgentConfig c;
    c.memory_mode = MemoryMode::GlobalCounts;
    LogGuardQAgent agent(c);
    LogEntry e;
    e.ip = "1.2.3.4";
    e.uri = "/";
    Observation obs{StateVector{}, &e};
    for (int i = 0; i < 250; ++i) {
        agent.act(obs);
        agent.observe(obs, Action::Benign, 2.0, obs, false);
    }
    CHECK(agent.perceive(obs).ip_freq == 1.0);
}
