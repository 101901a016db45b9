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

struct Transition {
    StateArray state{};
    Action action = Action::Malicious;
    double reward = 0.0;
    StateArray next_state{};
    bool done = false;
};

/// Fixed-capacity ring of transitions; the oldest entry is overwritten first.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity);

    void push(const Transition& t);
    std::vector<Transition> sample(std::size_t batch_size, std::mt19937_64& rng) const;

    std::size_t size() const { return size_; }
    std::size_t capacity() const { return storage_.size(); }
    // i = 0 is the oldest stored transition.
    const Transition& at(std::size_t i) const;

private:
    std::vector<Transition> storage_;
    std::size_t head_ = 0;  // next write slot
    std::size_t size_ = 0;
};

struct DqnConfig {
    std::vector<std::size_t> hidden{32, 32};
    double gamma = 0.99;
    double learning_rate = 1e-3;
    std::size_t batch_size = 32;
    std::size_t buffer_capacity = 10'000;
    std::size_t target_sync_interval = 100;  // environment steps
    double epsilon_start = 1.0;
    double epsilon_end = 0.05;
    // epsilon(e) = end + (start - end) * exp(-decay_rate * e / total_episodes)
    double epsilon_decay_rate = 5.0;
    std::uint64_t seed = 0;

    void validate() const;
};

Action greedy_action(const Mlp& net, const StateArray& state);
Action dqn_act(const StateArray& state, const Mlp& net, double epsilon, std::mt19937_64& rng);

/// Mean squared TD error, targets r + gamma * max_a' Q_target(s', a') * (1 - done).
double dqn_loss(const Mlp& online, const Mlp& target, std::span<const Transition> batch,
                double gamma);
/// Same loss; writes d(loss)/d(online params) into `grad` (overwritten).
double dqn_loss_gradient(const Mlp& online, const Mlp& target, std::span<const Transition> batch,
                         double gamma, std::span<double> grad);
/// One SGD step. Returns the pre-step loss; throws on a non-finite loss.
double dqn_train_batch(Mlp& online, const Mlp& target, std::span<const Transition> batch,
                       double gamma, double learning_rate);
void dqn_sync_target(const Mlp& online, Mlp& target);

double dqn_epsilon(std::size_t episode, std::size_t total_episodes, const DqnConfig& config);

class DqnAgent final : public Agent {
public:
    explicit DqnAgent(DqnConfig config);

    std::string_view kind() const override { return "dqn"; }
    void begin_run(std::size_t total_episodes) override { total_episodes_ = total_episodes; }
    void begin_episode(std::size_t episode) override;
    Action act(const Observation& obs) override;
    void observe(const Observation& obs, Action action, double reward, const Observation& next,
                 bool done) override;
    void save_policy(std::ostream& out) const override;

    const Mlp& online() const { return online_; }
    const Mlp& target() const { return target_; }
    const ReplayBuffer& replay() const { return replay_; }
    double epsilon() const { return epsilon_; }

private:
    DqnConfig config_;
    std::mt19937_64 rng_;
    Mlp online_;
    Mlp target_;
    ReplayBuffer replay_;
    std::size_t total_episodes_ = 1;
    std::size_t steps_ = 0;
    double epsilon_ = 1.0;
};

}  // namespace logguard
