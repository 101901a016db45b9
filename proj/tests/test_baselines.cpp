#include <doctest.h>

#include <cmath>
#include <memory>
#include <sstream>

#include "grad_check.hpp"
#include "logguard/config.hpp"
#include "logguard/loggen.hpp"
#include "logguard/policy_io.hpp"
#include "logguard/training.hpp"

using namespace logguard;

TEST_CASE("mlp forward matches a hand computation") {
    std::mt19937_64 rng(1);
    Mlp net({2, 2, 1}, rng);
    auto p = net.parameters();
    // layer 1: W (2x2) then b (2); layer 2: W (1x2) then b (1)
    const double vals[] = {0.5, -0.25, 0.1, 0.2, 0.05, -0.05, 1.0, -2.0, 0.3};
    std::copy(std::begin(vals), std::end(vals), p.begin());
    std::vector<double> x{1.0, 2.0};
    const double h0 = std::tanh(0.5 * 1 - 0.25 * 2 + 0.05);
    const double h1 = std::tanh(0.1 * 1 + 0.2 * 2 - 0.05);
    CHECK(net.forward(x)[0] == doctest::Approx(h0 - 2.0 * h1 + 0.3));
}

TEST_CASE("replay buffer overwrites the oldest transition") {
    ReplayBuffer b(3);
    for (int i = 0; i < 5; ++i) b.push({{}, Action::Benign, static_cast<double>(i), {}, false});
    CHECK(b.size() == 3);
    CHECK(b.at(0).reward == 2.0);
    CHECK(b.at(2).reward == 4.0);
    CHECK_THROWS(b.at(3));
    std::mt19937_64 rng(1);
    for (const auto& t : b.sample(50, rng)) CHECK(t.reward >= 2.0);
    CHECK_THROWS(ReplayBuffer(0));
    ReplayBuffer empty(2);
    CHECK_THROWS(empty.sample(1, rng));
}

TEST_CASE("dqn epsilon schedule") {
    DqnConfig c;
    CHECK(dqn_epsilon(0, 100, c) == doctest::Approx(1.0));
    CHECK(dqn_epsilon(100, 100, c) == doctest::Approx(0.05 + 0.95 * std::exp(-5.0)));
    CHECK(dqn_epsilon(50, 100, c) < dqn_epsilon(10, 100, c));
}

TEST_CASE("dqn target masks terminal transitions") {
    std::mt19937_64 rng(3);
    Mlp online({kStateDim, 4, kActionCount}, rng);
    Mlp target({kStateDim, 4, kActionCount}, rng);
    Transition t{{0.1, 1, 0.2, 0.3, 0}, Action::Investigate, 7.0, {0.5, 2, 0.1, 0.1, 1}, true};
    const double q = online.forward(t.state)[2];
    CHECK(dqn_loss(online, target, std::span(&t, 1), 0.99) == doctest::Approx((q - 7.0) * (q - 7.0)));
    t.done = false;
    auto qn = target.forward(t.next_state);
    const double y = 7.0 + 0.99 * *std::max_element(qn.begin(), qn.end());
    CHECK(dqn_loss(online, target, std::span(&t, 1), 0.99) == doctest::Approx((q - y) * (q - y)));
}

TEST_CASE("dqn gradients match finite differences") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) CHECK(gradcheck::dqn_instance(seed) < 1e-4);
}

TEST_CASE("ppo gradients match finite differences") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) CHECK(gradcheck::ppo_instance(seed) < 1e-4);
}

TEST_CASE("ppo clipped objective") {
    CHECK(ppo_clipped_objective(1.5, 1.0, 0.2) == doctest::Approx(1.2));
    CHECK(ppo_clipped_objective(0.5, 1.0, 0.2) == doctest::Approx(0.5));
    CHECK(ppo_clipped_objective(0.5, -1.0, 0.2) == doctest::Approx(-0.8));
    CHECK(ppo_clipped_objective(1.5, -1.0, 0.2) == doctest::Approx(-1.5));
    CHECK(ppo_clipped_objective(1.0, 2.0, 0.2) == doctest::Approx(2.0));
}

TEST_CASE("rollout returns and normalized advantages") {
    Rollout r;
    r.add({}, Action::Benign, 0.0, 0.0, 1.0, false);
    r.add({}, Action::Benign, 0.0, 0.0, 2.0, true);
    r.add({}, Action::Benign, 0.0, 0.0, 3.0, true);
    r.finalize(0.5);
    CHECK(r.returns[0] == doctest::Approx(2.0));
    CHECK(r.returns[1] == doctest::Approx(2.0));
    CHECK(r.returns[2] == doctest::Approx(3.0));
    double mean = 0.0, ss = 0.0;
    for (double a : r.advantages) mean += a;
    mean /= 3.0;
    for (double a : r.advantages) ss += (a - mean) * (a - mean);
    CHECK(std::abs(mean) < 1e-12);
    CHECK(ss / 3.0 == doctest::Approx(1.0));
    Rollout flat;
    for (int i = 0; i < 3; ++i) flat.add({}, Action::Benign, 0.0, 1.0, 1.0, true);
    flat.finalize(0.99);
    for (double a : flat.advantages) CHECK(a == 0.0);
}

TEST_CASE("ppo update lowers the loss on its own rollout") {
    std::mt19937_64 rng(5);
    PpoConfig c;
    c.learning_rate = 0.01;
    Mlp net({kStateDim, c.hidden, kActionCount + 1}, rng);
    Rollout r;
    for (int i = 0; i < 256; ++i) {
        auto s = gradcheck::random_state(rng);
        auto out = evaluate_policy(net, s);
        auto a = action_from_index(rng() % 4);
        r.add(s, a, out.log_probs[index_of(a)], out.value, a == Action::Malicious ? 10.0 : -1.0, true);
    }
    r.finalize(0.99);
    const double before = ppo_loss(net, r, {}, c).total;
    ppo_update(net, r, c, rng);
    CHECK(ppo_loss(net, r, {}, c).total < before);
}

TEST_CASE("baseline agents train and serialize") {
    GenConfig g;
    g.total_entries = 3000;
    g.chunk_size = 3000;
    g.seed = 21;
    auto data = std::make_shared<const Dataset>(generate_dataset(g, EntryProfile::defaults()), 3000);
    for (const char* kind : {"dqn", "ppo"}) {
        RunConfig cfg;
        auto resolved = resolve_run_config(cfg, 0);
        LogEnvironment env(data, resolved.env);
        auto agent = make_agent(kind, resolved);
        auto records = run_training(*agent, env, 250);
        CHECK(records.size() == 250);
        std::ostringstream out;
        agent->save_policy(out);
        std::istringstream in(out.str());
        auto rec = read_policy(in);
        CHECK(rec.kind == kind);
        CHECK_FALSE(rec.params.empty());
        for (double p : rec.params) CHECK(std::isfinite(p));
    }
    auto resolved = resolve_run_config(RunConfig{}, 0);
    PpoAgent ppo(resolved.ppo);
    LogEnvironment env(data, resolved.env);
    run_training(ppo, env, 150);  // 750 steps: one update at >= 512
    CHECK(ppo.updates() == 1);
    CHECK_THROWS(make_agent("sarsa", resolved));
}
