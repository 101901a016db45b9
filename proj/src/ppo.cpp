#include "logguard/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "logguard/config.hpp"
#include "logguard/policy_io.hpp"

namespace logguard {

void PpoConfig::validate() const {
    if (hidden == 0 || rollout_steps == 0 || epochs == 0 || minibatch_size == 0) {
        throw std::invalid_argument("PPO sizes must be positive");
    }
    if (!(clip_eps > 0.0 && clip_eps < 1.0)) throw std::invalid_argument("clip_eps must lie in (0, 1)");
    if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("PPO gamma must lie in [0, 1)");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("PPO learning rate must be positive");
    if (value_coef < 0.0 || entropy_coef < 0.0) {
        throw std::invalid_argument("PPO loss coefficients must be nonnegative");
    }
}

void Rollout::add(const StateArray& s, Action a, double log_prob, double value, double reward,
                  bool done) {
    states.push_back(s);
    actions.push_back(a);
    log_probs.push_back(log_prob);
    values.push_back(value);
    rewards.push_back(reward);
    dones.push_back(done);
}

void Rollout::clear() { *this = Rollout{}; }

void Rollout::finalize(double gamma) {
    const std::size_t n = size();
    returns.assign(n, 0.0);
    advantages.assign(n, 0.0);
    double running = 0.0;
    for (std::size_t i = n; i-- > 0;) {
        if (dones[i]) running = 0.0;
        running = rewards[i] + gamma * running;
        returns[i] = running;
        advantages[i] = running - values[i];
    }
    if (n == 0) return;
    const double mean = std::accumulate(advantages.begin(), advantages.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (double a : advantages) ss += (a - mean) * (a - mean);
    const double sd = std::max(std::sqrt(ss / static_cast<double>(n)), 1e-8);
    for (auto& a : advantages) a = (a - mean) / sd;
}

PolicyOutput evaluate_policy(const Mlp& net, const StateArray& state) {
    auto out = net.forward(state);
    PolicyOutput p;
    const double peak = *std::max_element(out.begin(), out.begin() + kActionCount);
    double total = 0.0;
    for (std::size_t k = 0; k < kActionCount; ++k) total += std::exp(out[k] - peak);
    const double log_norm = peak + std::log(total);
    for (std::size_t k = 0; k < kActionCount; ++k) {
        p.log_probs[k] = out[k] - log_norm;
        p.probs[k] = std::exp(p.log_probs[k]);
    }
    p.value = out[kActionCount];
    return p;
}

double ppo_clipped_objective(double ratio, double advantage, double clip_eps) {
    const double clipped = std::clamp(ratio, 1.0 - clip_eps, 1.0 + clip_eps);
    return std::min(ratio * advantage, clipped * advantage);
}

namespace {

std::vector<std::size_t> all_indices(const Rollout& rollout, std::span<const std::size_t> indices) {
    if (!indices.empty()) return {indices.begin(), indices.end()};
    std::vector<std::size_t> idx(rollout.size());
    std::iota(idx.begin(), idx.end(), 0);
    return idx;
}

void check_rollout(const Rollout& r) {
    const std::size_t n = r.size();
    if (n == 0) throw std::invalid_argument("PPO rollout is empty");
    if (r.actions.size() != n || r.log_probs.size() != n || r.values.size() != n ||
        r.rewards.size() != n || r.dones.size() != n || r.returns.size() != n ||
        r.advantages.size() != n) {
        throw std::invalid_argument("PPO rollout arrays have mismatched lengths (finalize first)");
    }
}

PpoLoss accumulate(const Mlp& net, const Rollout& rollout, std::span<const std::size_t> indices,
                   const PpoConfig& config, std::span<double> grad) {
    check_rollout(rollout);
    const auto idx = all_indices(rollout, indices);
    const double scale = 1.0 / static_cast<double>(idx.size());
    const bool want_grad = !grad.empty();
    if (want_grad) std::fill(grad.begin(), grad.end(), 0.0);

    PpoLoss loss;
    Mlp::Trace trace;
    std::vector<double> grad_out(kActionCount + 1);
    for (std::size_t i : idx) {
        auto out = net.forward(rollout.states[i], trace);
        const double peak = *std::max_element(out.begin(), out.begin() + kActionCount);
        double total = 0.0;
        for (std::size_t k = 0; k < kActionCount; ++k) total += std::exp(out[k] - peak);
        const double log_norm = peak + std::log(total);
        std::array<double, kActionCount> logp{}, p{};
        double entropy = 0.0;
        for (std::size_t k = 0; k < kActionCount; ++k) {
            logp[k] = out[k] - log_norm;
            p[k] = std::exp(logp[k]);
            entropy -= p[k] * logp[k];
        }
        const std::size_t a = index_of(rollout.actions[i]);
        const double adv = rollout.advantages[i];
        const double ratio = std::exp(logp[a] - rollout.log_probs[i]);
        const double surrogate = ppo_clipped_objective(ratio, adv, config.clip_eps);
        const double value_err = out[kActionCount] - rollout.returns[i];

        loss.surrogate += surrogate * scale;
        loss.value_mse += value_err * value_err * scale;
        loss.entropy += entropy * scale;

        if (!want_grad) continue;
        const double clipped = std::clamp(ratio, 1.0 - config.clip_eps, 1.0 + config.clip_eps);
        // The min picks the unclipped branch unless clipping makes it smaller.
        const double d_obj_d_ratio = (ratio * adv <= clipped * adv) ? adv : 0.0;
        for (std::size_t k = 0; k < kActionCount; ++k) {
            const double d_ratio = ratio * ((k == a ? 1.0 : 0.0) - p[k]);
            const double d_entropy = -p[k] * (logp[k] + entropy);
            grad_out[k] = (-d_obj_d_ratio * d_ratio - config.entropy_coef * d_entropy) * scale;
        }
        grad_out[kActionCount] = 2.0 * config.value_coef * value_err * scale;
        net.backward(trace, grad_out, grad);
    }
    loss.total = -loss.surrogate + config.value_coef * loss.value_mse - config.entropy_coef * loss.entropy;
    return loss;
}

}  // namespace

PpoLoss ppo_loss(const Mlp& net, const Rollout& rollout, std::span<const std::size_t> indices,
                 const PpoConfig& config) {
    return accumulate(net, rollout, indices, config, {});
}

PpoLoss ppo_loss_gradient(const Mlp& net, const Rollout& rollout,
                          std::span<const std::size_t> indices, const PpoConfig& config,
                          std::span<double> grad) {
    if (grad.size() != net.parameter_count()) throw std::invalid_argument("gradient buffer size mismatch");
    return accumulate(net, rollout, indices, config, grad);
}

void ppo_update(Mlp& net, const Rollout& rollout, const PpoConfig& config, std::mt19937_64& rng) {
    check_rollout(rollout);
    std::vector<std::size_t> order(rollout.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> grad(net.parameter_count());
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t start = 0; start < order.size(); start += config.minibatch_size) {
            std::span<const std::size_t> batch(order.data() + start,
                                               std::min(config.minibatch_size, order.size() - start));
            auto loss = ppo_loss_gradient(net, rollout, batch, config, grad);
            if (!std::isfinite(loss.total)) throw std::runtime_error("PPO loss is not finite");
            auto params = net.parameters();
            for (std::size_t i = 0; i < params.size(); ++i) params[i] -= config.learning_rate * grad[i];
        }
    }
    if (!net.all_finite()) throw std::runtime_error("PPO parameters became non-finite");
}

PpoAgent::PpoAgent(PpoConfig config) : config_(config), rng_(config.seed) {
    config_.validate();
    net_ = Mlp({kStateDim, config_.hidden, kActionCount + 1}, rng_);
}

Action PpoAgent::act(const Observation& obs) {
    last_ = evaluate_policy(net_, obs.state.to_array());
    std::discrete_distribution<std::size_t> dist(last_.probs.begin(), last_.probs.end());
    return action_from_index(dist(rng_));
}

void PpoAgent::observe(const Observation& obs, Action action, double reward, const Observation& next,
                       bool done) {
    (void)next;
    rollout_.add(obs.state.to_array(), action, last_.log_probs[index_of(action)], last_.value, reward,
                 done);
}

void PpoAgent::end_episode() {
    if (frozen_ || rollout_.size() < config_.rollout_steps) return;
    rollout_.finalize(config_.gamma);
    ppo_update(net_, rollout_, config_, rng_);
    rollout_.clear();
    ++updates_;
}

void PpoAgent::save_policy(std::ostream& out) const {
    PolicyRecord record;
    record.kind = std::string(kind());
    record.tag = "mlp";
    record.config = nlohmann::json(config_);
    record.params.assign(net_.parameters().begin(), net_.parameters().end());
    write_policy(out, record);
}

}  // namespace logguard
