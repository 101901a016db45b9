#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "logguard/agent.hpp"
#include "logguard/env.hpp"

namespace logguard {

enum class PlasticityMode { Schedule, Variance };
enum class ExplorationMode { Softmax, EpsGreedy, AdaptiveEps };
// Bounded: ip_freq from the 100-slot recent-IP window.
// GlobalCounts: ip_freq from all-time per-IP counts / 100, clamped to 1.
enum class MemoryMode { Bounded, GlobalCounts };

struct AgentConfig {
    double gamma = 0.99;
    double initial_learning_rate = 0.02;
    double learning_rate_decay = 0.999;
    double min_learning_rate = 0.001;
    double initial_temperature = 1.0;
    double temperature_decay = 0.9995;
    double min_temperature = 0.6;
    PlasticityMode plasticity_mode = PlasticityMode::Schedule;
    double plasticity_k = 0.1;
    bool curiosity_enabled = true;
    double curiosity_weight = 1.0;
    double penalty_prob = 0.05;
    double penalty_value = 0.5;
    ExplorationMode exploration_mode = ExplorationMode::Softmax;
    MemoryMode memory_mode = MemoryMode::Bounded;
    double weight_init_sd = 0.01;
    std::size_t memory_capacity = 100;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Linear Q-function: Q(s, a) = sum_i s[i] * W[i][a], stored row-major.
class WeightMatrix {
public:
    static constexpr std::size_t kRows = kStateDim;
    static constexpr std::size_t kCols = kActionCount;

    WeightMatrix() { values_.fill(0.0); }

    static WeightMatrix random_normal(double sd, std::mt19937_64& rng);

    double& at(std::size_t row, std::size_t col) { return values_[row * kCols + col]; }
    double at(std::size_t row, std::size_t col) const { return values_[row * kCols + col]; }

    std::array<double, kActionCount> q_values(const StateArray& state) const;
    double q_value(const StateArray& state, Action action) const;
    bool all_finite() const;

    const std::array<double, kRows * kCols>& values() const { return values_; }
    std::array<double, kRows * kCols>& values() { return values_; }

    friend bool operator==(const WeightMatrix&, const WeightMatrix&) = default;

private:
    std::array<double, kRows * kCols> values_;
};

/// Last-N rewards with population mean and variance over the window.
class RewardMemory {
public:
    explicit RewardMemory(std::size_t capacity = 100);

    void push(double reward);
    std::size_t size() const { return rewards_.size(); }
    const std::deque<double>& contents() const { return rewards_; }
    double mean() const { return mean_; }
    double variance() const { return variance_; }
    double sd() const;

private:
    std::size_t capacity_;
    std::deque<double> rewards_;
    double mean_ = 0.0;
    double variance_ = 0.0;
};

struct DualMemory {
    explicit DualMemory(std::size_t capacity = 100) : short_term(capacity), long_term(capacity) {}

    ShortTermMemory short_term;
    RewardMemory long_term;
    std::unordered_map<std::string, std::uint64_t> ip_counts;

    void update(const std::string& ip, double reward);
};

using StateKey = std::array<std::int64_t, kStateDim>;

struct StateKeyHash {
    std::size_t operator()(const StateKey& key) const noexcept;
};

// State components rounded to 3 decimals.
StateKey state_key(const StateVector& state);

class VisitCounter {
public:
    std::uint64_t visit(const StateKey& key) { return ++counts_[key]; }
    std::uint64_t count(const StateKey& key) const;
    std::size_t distinct_states() const { return counts_.size(); }

private:
    std::unordered_map<StateKey, std::uint64_t, StateKeyHash> counts_;
};

// ---- formulas -------------------------------------------------------------

/// Boltzmann distribution over q/temperature.
std::array<double, kActionCount> softmax_probabilities(const std::array<double, kActionCount>& q,
                                                       double temperature);
Action select_action(const StateVector& state, const WeightMatrix& weights, double temperature,
                     std::mt19937_64& rng);

double temperature_at(std::size_t episode, const AgentConfig& config);
double curiosity_bonus(std::uint64_t visit_count);
double shape_reward(double base_reward, std::uint64_t visit_count, std::mt19937_64& rng,
                    const AgentConfig& config);
double learning_rate_at(std::size_t episode, double reward_variance, const AgentConfig& config);
double epsilon_at(std::size_t t);
double adaptive_epsilon(std::size_t episode, double mean, double sd);

/// delta = r + gamma * max_a' Q(s', a') - Q(s, a)
double td_error(const WeightMatrix& weights, const StateVector& state, Action action, double reward,
                const StateVector& next_state, double gamma);
/// W[:, a] += eta * delta * s
void apply_td_increment(WeightMatrix& weights, const StateVector& state, Action action, double eta,
                        double delta);

struct TdUpdate {
    double delta = 0.0;
    double q_change = 0.0;  // |Q_new(s, a) - Q_old(s, a)|
};

TdUpdate td_update(WeightMatrix& weights, const StateVector& state, Action action, double reward,
                   const StateVector& next_state, double eta, double gamma);

// ---- agent ----------------------------------------------------------------

class LogGuardQAgent final : public Agent {
public:
    explicit LogGuardQAgent(AgentConfig config);

    std::string_view kind() const override { return "logguardq"; }
    void begin_episode(std::size_t episode) override;
    Action act(const Observation& obs) override;
    void observe(const Observation& obs, Action action, double reward, const Observation& next,
                 bool done) override;
    void save_policy(std::ostream& out) const override;

    const AgentConfig& config() const { return config_; }
    const WeightMatrix& weights() const { return weights_; }
    void set_weights(const WeightMatrix& w) { weights_ = w; }
    const DualMemory& memory() const { return memory_; }
    const VisitCounter& visits() const { return visits_; }
    double temperature() const { return temperature_; }

    /// |dQ(s, a)| of every update so far, for convergence analysis.
    const std::vector<double>& q_deltas() const { return q_deltas_; }

    /// The agent's own view of an entry, built from its dual memory.
    StateVector perceive(const Observation& obs) const;

private:
    AgentConfig config_;
    std::mt19937_64 rng_;
    WeightMatrix weights_;
    DualMemory memory_;
    VisitCounter visits_;
    std::size_t episode_ = 0;
    double temperature_ = 1.0;

    StateVector pending_state_;
    std::uint64_t pending_visits_ = 0;
    std::vector<double> q_deltas_;
};

std::string_view to_string(PlasticityMode m);
std::string_view to_string(ExplorationMode m);
std::string_view to_string(MemoryMode m);

}  // namespace logguard
