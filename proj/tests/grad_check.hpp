#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "logguard/dqn.hpp"
#include "logguard/ppo.hpp"

namespace gradcheck {

using namespace logguard;

// ||g - fd|| / max(||g||, ||fd||) with central differences of step h.
inline double relative_error(std::span<double> params, std::span<const double> analytic,
                             const std::function<double()>& loss, double h = 1e-5) {
    double diff = 0.0, na = 0.0, nf = 0.0;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double saved = params[i];
        params[i] = saved + h;
        const double up = loss();
        params[i] = saved - h;
        const double down = loss();
        params[i] = saved;
        const double fd = (up - down) / (2.0 * h);
        diff += (analytic[i] - fd) * (analytic[i] - fd);
        na += analytic[i] * analytic[i];
        nf += fd * fd;
    }
    const double scale = std::max(std::sqrt(na), std::sqrt(nf));
    return scale == 0.0 ? 0.0 : std::sqrt(diff) / scale;
}

inline StateArray random_state(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return {u(rng), static_cast<double>(rng() % 4), u(rng), u(rng) * 2.0, static_cast<double>(rng() % 2)};
}

inline double dqn_instance(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Mlp online({kStateDim, 6, 5, kActionCount}, rng);
    Mlp target({kStateDim, 6, 5, kActionCount}, rng);
    std::normal_distribution<double> n(0.0, 5.0);
    std::vector<Transition> batch;
    for (int i = 0; i < 6; ++i) {
        batch.push_back({random_state(rng), action_from_index(rng() % 4), n(rng), random_state(rng), rng() % 3 == 0});
    }
    std::vector<double> grad(online.parameter_count());
    dqn_loss_gradient(online, target, batch, 0.99, grad);
    return relative_error(online.parameters(), grad, [&] { return dqn_loss(online, target, batch, 0.99); });
}

// Rollouts whose probability ratios sit away from the clip kinks, where the
// objective is not differentiable.
inline double ppo_instance(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    PpoConfig config;
    config.hidden = 6;
    Mlp net({kStateDim, config.hidden, kActionCount + 1}, rng);
    std::normal_distribution<double> n(0.0, 1.0);
    Rollout r;
    for (int i = 0; i < 8; ++i) {
        const auto s = random_state(rng);
        const auto out = evaluate_policy(net, s);
        const auto a = action_from_index(rng() % 4);
        double old_logp = 0.0;
        do {
            old_logp = out.log_probs[index_of(a)] + 0.3 * n(rng);
        } while (std::abs(std::abs(out.log_probs[index_of(a)] - old_logp) - std::log(1.2)) < 1e-3 ||
                 std::abs(std::abs(out.log_probs[index_of(a)] - old_logp) - std::log(1.0 / 0.8)) < 1e-3);
        r.add(s, a, old_logp, out.value + n(rng), 5.0 * n(rng), i % 4 == 3);
    }
    r.finalize(0.99);
    std::vector<double> grad(net.parameter_count());
    ppo_loss_gradient(net, r, {}, config, grad);
    return relative_error(net.parameters(), grad, [&] { return ppo_loss(net, r, {}, config).total; });
}

}  // namespace gradcheck
