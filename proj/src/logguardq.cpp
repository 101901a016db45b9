#include "logguard/logguardq.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "logguard/config.hpp"
#include "logguard/policy_io.hpp"

namespace logguard {

void AgentConfig::validate() const {
    auto in_unit = [](double v) { return v > 0.0 && v <= 1.0; };
    if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in [0, 1)");
    if (!in_unit(learning_rate_decay) || !in_unit(temperature_decay)) {
        throw std::invalid_argument("decay factors must lie in (0, 1]");
    }
    if (!(min_learning_rate > 0.0 && min_learning_rate <= initial_learning_rate)) {
        throw std::invalid_argument("min_learning_rate must be positive and <= initial_learning_rate");
    }
    if (!(min_temperature > 0.0 && min_temperature <= initial_temperature)) {
        throw std::invalid_argument("min_temperature must be positive and <= initial_temperature");
    }
    if (!(plasticity_k >= 0.0)) throw std::invalid_argument("plasticity_k must be nonnegative");
    if (!(penalty_prob >= 0.0 && penalty_prob <= 1.0)) {
        throw std::invalid_argument("penalty_prob must lie in [0, 1]");
    }
    if (!(curiosity_weight >= 0.0)) throw std::invalid_argument("curiosity_weight must be nonnegative");
    if (!(weight_init_sd >= 0.0)) throw std::invalid_argument("weight_init_sd must be nonnegative");
    if (memory_capacity == 0) throw std::invalid_argument("memory_capacity must be positive");
}

// ---- weights ---------------------------------------------------------------

WeightMatrix WeightMatrix::random_normal(double sd, std::mt19937_64& rng) {
    WeightMatrix w;
    if (sd > 0.0) {
        std::normal_distribution<double> init(0.0, sd);
        for (auto& v : w.values_) v = init(rng);
    }
    return w;
}

std::array<double, kActionCount> WeightMatrix::q_values(const StateArray& state) const {
    std::array<double, kActionCount> q{};
    for (std::size_t r = 0; r < kRows; ++r) {
        for (std::size_t c = 0; c < kCols; ++c) q[c] += state[r] * at(r, c);
    }
    return q;
}

double WeightMatrix::q_value(const StateArray& state, Action action) const {
    double q = 0.0;
    for (std::size_t r = 0; r < kRows; ++r) q += state[r] * at(r, index_of(action));
    return q;
}

bool WeightMatrix::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

// ---- memory ----------------------------------------------------------------

RewardMemory::RewardMemory(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0) throw std::invalid_argument("reward memory needs capacity");
}

void RewardMemory::push(double reward) {
    rewards_.push_back(reward);
    if (rewards_.size() > capacity_) rewards_.pop_front();
    // Two-pass over the window; it is small and this keeps the statistics exact.
    const double n = static_cast<double>(rewards_.size());
    mean_ = std::accumulate(rewards_.begin(), rewards_.end(), 0.0) / n;
    double ss = 0.0;
    for (double r : rewards_) ss += (r - mean_) * (r - mean_);
    variance_ = ss / n;
}

double RewardMemory::sd() const { return std::sqrt(variance_); }

void DualMemory::update(const std::string& ip, double reward) {
    short_term.push(ip);
    long_term.push(reward);
    ++ip_counts[ip];
}

std::size_t StateKeyHash::operator()(const StateKey& key) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto v : key) {
        h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
}

StateKey state_key(const StateVector& state) {
    StateKey key{};
    auto values = state.to_array();
    for (std::size_t i = 0; i < kStateDim; ++i) key[i] = std::llround(values[i] * 1000.0);
    return key;
}

std::uint64_t VisitCounter::count(const StateKey& key) const {
    auto it = counts_.find(key);
    return it == counts_.end() ? 0 : it->second;
}

// ---- formulas ----------------------------------------------------------------

std::array<double, kActionCount> softmax_probabilities(const std::array<double, kActionCount>& q,
                                                       double temperature) {
    if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
    const double peak = *std::max_element(q.begin(), q.end());
    std::array<double, kActionCount> p{};
    double total = 0.0;
    for (std::size_t i = 0; i < kActionCount; ++i) {
        p[i] = std::exp((q[i] - peak) / temperature);
        total += p[i];
    }
    for (auto& v : p) v /= total;
    return p;
}

Action select_action(const StateVector& state, const WeightMatrix& weights, double temperature,
                     std::mt19937_64& rng) {
    auto p = softmax_probabilities(weights.q_values(state.to_array()), temperature);
    std::discrete_distribution<std::size_t> dist(p.begin(), p.end());
    return action_from_index(dist(rng));
}

double temperature_at(std::size_t episode, const AgentConfig& config) {
    return std::max(config.min_temperature,
                    config.initial_temperature *
                        std::pow(config.temperature_decay, static_cast<double>(episode)));
}

double curiosity_bonus(std::uint64_t visit_count) {
    return 1.0 / std::sqrt(static_cast<double>(visit_count) + 1.0);
}

double shape_reward(double base_reward, std::uint64_t visit_count, std::mt19937_64& rng,
                    const AgentConfig& config) {
    double reward = base_reward;
    if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < config.penalty_prob) {
        reward -= config.penalty_value;
    }
    if (config.curiosity_enabled) reward += config.curiosity_weight * curiosity_bonus(visit_count);
    return reward;
}

double learning_rate_at(std::size_t episode, double reward_variance, const AgentConfig& config) {
    if (!(reward_variance >= 0.0)) throw std::invalid_argument("reward variance must be nonnegative");
    if (config.plasticity_mode == PlasticityMode::Variance) {
        return config.initial_learning_rate * (1.0 + config.plasticity_k * reward_variance);
    }
    return std::max(config.min_learning_rate,
                    config.initial_learning_rate *
                        std::pow(config.learning_rate_decay, static_cast<double>(episode)));
}

double epsilon_at(std::size_t t) {
    return std::max(0.01, 0.1 * std::exp(-0.001 * static_cast<double>(t)));
}

double adaptive_epsilon(std::size_t episode, double mean, double sd) {
    // sigma/|mu| is undefined at mu = 0; fall back to the floor.
    if (mean == 0.0) return 0.01;
    double raw = std::exp(-static_cast<double>(episode) / 1000.0) * (1.0 + sd / std::abs(mean));
    return std::min(1.0, std::max(0.01, raw));
}

double td_error(const WeightMatrix& weights, const StateVector& state, Action action, double reward,
                const StateVector& next_state, double gamma) {
    auto next_q = weights.q_values(next_state.to_array());
    double best_next = *std::max_element(next_q.begin(), next_q.end());
    return reward + gamma * best_next - weights.q_value(state.to_array(), action);
}

void apply_td_increment(WeightMatrix& weights, const StateVector& state, Action action, double eta,
                        double delta) {
    auto s = state.to_array();
    const std::size_t col = index_of(action);
    for (std::size_t r = 0; r < kStateDim; ++r) weights.at(r, col) += eta * delta * s[r];
}

TdUpdate td_update(WeightMatrix& weights, const StateVector& state, Action action, double reward,
                   const StateVector& next_state, double eta, double gamma) {
    auto s = state.to_array();
    auto s_next = next_state.to_array();
    bool finite = std::isfinite(reward) && std::isfinite(eta) && std::isfinite(gamma) &&
                  weights.all_finite();
    for (std::size_t i = 0; i < kStateDim; ++i) finite = finite && std::isfinite(s[i]) && std::isfinite(s_next[i]);
    if (!finite) throw std::domain_error("td_update received a non-finite input");
    if (!(eta > 0.0)) throw std::invalid_argument("learning rate must be positive");

    TdUpdate out;
    const double before = weights.q_value(s, action);
    out.delta = td_error(weights, state, action, reward, next_state, gamma);
    apply_td_increment(weights, state, action, eta, out.delta);
    if (!weights.all_finite()) throw std::domain_error("td_update produced non-finite weights");
    out.q_change = std::abs(weights.q_value(s, action) - before);
    return out;
}

// ---- agent -----------------------------------------------------------------

LogGuardQAgent::LogGuardQAgent(AgentConfig config)
    : config_(config), rng_(config.seed), memory_(config.memory_capacity) {
    config_.validate();
    weights_ = WeightMatrix::random_normal(config_.weight_init_sd, rng_);
    temperature_ = config_.initial_temperature;
}

void LogGuardQAgent::begin_episode(std::size_t episode) {
    episode_ = episode;
    temperature_ = temperature_at(episode, config_);
}

StateVector LogGuardQAgent::perceive(const Observation& obs) const {
    if (obs.entry == nullptr) return obs.state;
    StateVector s = build_state(*obs.entry, memory_.short_term);
    if (config_.memory_mode == MemoryMode::GlobalCounts) {
        auto it = memory_.ip_counts.find(obs.entry->ip);
        double count = it == memory_.ip_counts.end() ? 0.0 : static_cast<double>(it->second);
        s.ip_freq = std::min(1.0, count / 100.0);
    }
    return s;
}

Action LogGuardQAgent::act(const Observation& obs) {
    const StateVector s = perceive(obs);
    Action action{};
    switch (config_.exploration_mode) {
        case ExplorationMode::Softmax:
            action = select_action(s, weights_, temperature_, rng_);
            break;
        case ExplorationMode::EpsGreedy:
        case ExplorationMode::AdaptiveEps: {
            double eps = config_.exploration_mode == ExplorationMode::EpsGreedy
                             ? epsilon_at(episode_)
                             : adaptive_epsilon(episode_, memory_.long_term.mean(),
                                                memory_.long_term.sd());
            if (std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < eps) {
                action = action_from_index(
                    std::uniform_int_distribution<std::size_t>(0, kActionCount - 1)(rng_));
            } else {
                auto q = weights_.q_values(s.to_array());
                action = action_from_index(
                    static_cast<std::size_t>(std::max_element(q.begin(), q.end()) - q.begin()));
            }
            break;
        }
    }
    pending_state_ = s;
    pending_visits_ = visits_.visit(state_key(s));
    return action;
}

void LogGuardQAgent::observe(const Observation& obs, Action action, double reward,
                             const Observation& next, bool done) {
    const double shaped = shape_reward(reward, pending_visits_, rng_, config_);
    if (obs.entry != nullptr) memory_.update(obs.entry->ip, shaped);

    const double eta = learning_rate_at(episode_, memory_.long_term.variance(), config_);
    // The episode cap is a time limit, not a terminal state: keep bootstrapping
    // from the next entry whenever one exists.
    (void)done;
    const StateVector next_state = next.entry != nullptr ? perceive(next) : StateVector{};
    auto update = td_update(weights_, pending_state_, action, shaped, next_state, eta, config_.gamma);
    q_deltas_.push_back(update.q_change);
}

void LogGuardQAgent::save_policy(std::ostream& out) const {
    PolicyRecord record;
    record.kind = std::string(kind());
    record.tag = std::string(to_string(config_.memory_mode));
    record.config = nlohmann::json(config_);
    record.params.assign(weights_.values().begin(), weights_.values().end());
    write_policy(out, record);
}

std::string_view to_string(PlasticityMode m) {
    return m == PlasticityMode::Schedule ? "schedule" : "variance";
}

std::string_view to_string(ExplorationMode m) {
    switch (m) {
        case ExplorationMode::Softmax: return "softmax";
        case ExplorationMode::EpsGreedy: return "eps_greedy";
        case ExplorationMode::AdaptiveEps: return "adaptive_eps";
    }
    return "?";
}

std::string_view to_string(MemoryMode m) {
    return m == MemoryMode::Bounded ? "bounded" : "global_counts";
}

}  // namespace logguard
