#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "logguard/agent.hpp"
#include "logguard/env.hpp"
#include "logguard/mlp.hpp"

namespace logguard {

struct PpoConfig {
    std::size_t hidden = 32;
    double gamma = 0.99;
    double learning_rate = 1e-3;
    double clip_eps = 0.2;
    std::size_t rollout_steps = 512;
    std::size_t epochs = 4;
    std::size_t minibatch_size = 64;
    double value_coef = 0.5;
    double entropy_coef = 0.01;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Transitions collected under one policy snapshot. Advantages and returns
/// are filled by finalize().
struct Rollout {
    std::vector<StateArray> states;
    std::vector<Action> actions;
    std::vector<double> log_probs;
    std::vector<double> values;
    std::vector<double> rewards;
    std::vector<bool> dones;
    std::vector<double> returns;
    std::vector<double> advantages;

    std::size_t size() const { return states.size(); }
    bool empty() const { return states.empty(); }
    void add(const StateArray& s, Action a, double log_prob, double value, double reward, bool done);
    void clear();

    // Monte-Carlo discounted returns per episode, advantage = return - value,
    // normalized to zero mean and unit SD (SD floored at 1e-8).
    void finalize(double gamma);
};

struct PolicyOutput {
    std::array<double, kActionCount> probs{};
    std::array<double, kActionCount> log_probs{};
    double value = 0.0;
};

/// Actor-critic head: outputs [logits(4), value].
PolicyOutput evaluate_policy(const Mlp& net, const StateArray& state);

/// min(r * A, clip(r, 1 - eps, 1 + eps) * A)
double ppo_clipped_objective(double ratio, double advantage, double clip_eps);

struct PpoLoss {
    double total = 0.0;      // -surrogate + value_coef * value_mse - entropy_coef * entropy
    double surrogate = 0.0;  // mean clipped objective
    double value_mse = 0.0;
    double entropy = 0.0;
};

/// Loss over the given rollout indices (all of them when `indices` is empty).
PpoLoss ppo_loss(const Mlp& net, const Rollout& rollout, std::span<const std::size_t> indices,
                 const PpoConfig& config);
/// Same loss; writes d(total)/d(params) into `grad` (overwritten).
PpoLoss ppo_loss_gradient(const Mlp& net, const Rollout& rollout,
                          std::span<const std::size_t> indices, const PpoConfig& config,
                          std::span<double> grad);
/// `epochs` passes of shuffled minibatch SGD on the loss.
void ppo_update(Mlp& net, const Rollout& rollout, const PpoConfig& config, std::mt19937_64& rng);

class PpoAgent final : public Agent {
public:
    explicit PpoAgent(PpoConfig config);

    std::string_view kind() const override { return "ppo"; }
    void begin_episode(std::size_t episode) override { (void)episode; }
    Action act(const Observation& obs) override;
    void observe(const Observation& obs, Action action, double reward, const Observation& next,
                 bool done) override;
    void end_episode() override;
    void save_policy(std::ostream& out) const override;

    const Mlp& network() const { return net_; }
    const Rollout& rollout() const { return rollout_; }
    std::size_t updates() const { return updates_; }
    // Skip the update at episode end; used to inspect collected rollouts.
    void set_frozen(bool frozen) { frozen_ = frozen; }

private:
    PpoConfig config_;
    std::mt19937_64 rng_;
    Mlp net_;
    Rollout rollout_;
    PolicyOutput last_;
    std::size_t updates_ = 0;
    bool frozen_ = false;
};

}  // namespace logguard
