#include "logguard/dqn.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "logguard/config.hpp"
#include "logguard/policy_io.hpp"

namespace logguard {

void DqnConfig::validate() const {
    if (batch_size == 0 || buffer_capacity == 0 || target_sync_interval == 0) {
        throw std::invalid_argument("DQN batch size, buffer capacity and sync interval must be positive");
    }
    if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("DQN gamma must lie in [0, 1)");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("DQN learning rate must be positive");
    if (!(epsilon_start >= 0.0 && epsilon_start <= 1.0 && epsilon_end >= 0.0 &&
          epsilon_end <= epsilon_start)) {
        throw std::invalid_argument("DQN epsilon schedule must satisfy 0 <= end <= start <= 1");
    }
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : storage_(capacity) {
    if (capacity == 0) throw std::invalid_argument("replay buffer needs capacity");
}

void ReplayBuffer::push(const Transition& t) {
    storage_[head_] = t;
    head_ = (head_ + 1) % storage_.size();
    size_ = std::min(size_ + 1, storage_.size());
}

const Transition& ReplayBuffer::at(std::size_t i) const {
    if (i >= size_) throw std::out_of_range("replay index out of range");
    std::size_t oldest = size_ < storage_.size() ? 0 : head_;
    return storage_[(oldest + i) % storage_.size()];
}

std::vector<Transition> ReplayBuffer::sample(std::size_t batch_size, std::mt19937_64& rng) const {
    if (size_ == 0) throw std::logic_error("cannot sample an empty replay buffer");
    std::uniform_int_distribution<std::size_t> pick(0, size_ - 1);
    std::vector<Transition> batch;
    batch.reserve(batch_size);
    for (std::size_t i = 0; i < batch_size; ++i) batch.push_back(at(pick(rng)));
    return batch;
}

Action greedy_action(const Mlp& net, const StateArray& state) {
    auto q = net.forward(state);
    return action_from_index(static_cast<std::size_t>(std::max_element(q.begin(), q.end()) - q.begin()));
}

Action dqn_act(const StateArray& state, const Mlp& net, double epsilon, std::mt19937_64& rng) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in [0, 1]");
    if (epsilon > 0.0 && std::uniform_real_distribution<double>(0.0, 1.0)(rng) < epsilon) {
        return action_from_index(std::uniform_int_distribution<std::size_t>(0, kActionCount - 1)(rng));
    }
    return greedy_action(net, state);
}

namespace {

double td_target(const Mlp& target, const Transition& t, double gamma) {
    if (t.done || gamma == 0.0) return t.reward;
    auto q_next = target.forward(t.next_state);
    return t.reward + gamma * *std::max_element(q_next.begin(), q_next.end());
}

}  // namespace

double dqn_loss(const Mlp& online, const Mlp& target, std::span<const Transition> batch,
                double gamma) {
    if (batch.empty()) throw std::invalid_argument("DQN batch is empty");
    double loss = 0.0;
    for (const auto& t : batch) {
        double err = online.forward(t.state)[index_of(t.action)] - td_target(target, t, gamma);
        loss += err * err;
    }
    return loss / static_cast<double>(batch.size());
}

double dqn_loss_gradient(const Mlp& online, const Mlp& target, std::span<const Transition> batch,
                         double gamma, std::span<double> grad) {
    if (batch.empty()) throw std::invalid_argument("DQN batch is empty");
    std::fill(grad.begin(), grad.end(), 0.0);
    const double scale = 1.0 / static_cast<double>(batch.size());
    double loss = 0.0;
    Mlp::Trace trace;
    std::vector<double> grad_out(online.output_size());
    for (const auto& t : batch) {
        auto q = online.forward(t.state, trace);
        double err = q[index_of(t.action)] - td_target(target, t, gamma);
        loss += err * err;
        std::fill(grad_out.begin(), grad_out.end(), 0.0);
        grad_out[index_of(t.action)] = 2.0 * err * scale;
        online.backward(trace, grad_out, grad);
    }
    return loss * scale;
}

double dqn_train_batch(Mlp& online, const Mlp& target, std::span<const Transition> batch,
                       double gamma, double learning_rate) {
    std::vector<double> grad(online.parameter_count());
    double loss = dqn_loss_gradient(online, target, batch, gamma, grad);
    if (!std::isfinite(loss)) {
        std::ostringstream msg;
        msg << "DQN loss is not finite (loss=" << loss << ", batch=" << batch.size() << ")";
        throw std::runtime_error(msg.str());
    }
    auto params = online.parameters();
    for (std::size_t i = 0; i < params.size(); ++i) params[i] -= learning_rate * grad[i];
    if (!online.all_finite()) throw std::runtime_error("DQN parameters became non-finite");
    return loss;
}

void dqn_sync_target(const Mlp& online, Mlp& target) { target = online; }

double dqn_epsilon(std::size_t episode, std::size_t total_episodes, const DqnConfig& config) {
    double progress = static_cast<double>(episode) / static_cast<double>(std::max<std::size_t>(total_episodes, 1));
    return config.epsilon_end +
           (config.epsilon_start - config.epsilon_end) * std::exp(-config.epsilon_decay_rate * progress);
}

namespace {

std::vector<std::size_t> dqn_layers(const DqnConfig& config) {
    std::vector<std::size_t> sizes{kStateDim};
    sizes.insert(sizes.end(), config.hidden.begin(), config.hidden.end());
    sizes.push_back(kActionCount);
    return sizes;
}

}  // namespace

DqnAgent::DqnAgent(DqnConfig config)
    : config_(std::move(config)), rng_(config_.seed), replay_(config_.buffer_capacity) {
    config_.validate();
    online_ = Mlp(dqn_layers(config_), rng_);
    target_ = online_;
}

void DqnAgent::begin_episode(std::size_t episode) {
    epsilon_ = dqn_epsilon(episode, total_episodes_, config_);
}

Action DqnAgent::act(const Observation& obs) {
    return dqn_act(obs.state.to_array(), online_, epsilon_, rng_);
}

void DqnAgent::observe(const Observation& obs, Action action, double reward, const Observation& next,
                       bool done) {
    replay_.push({obs.state.to_array(), action, reward, next.state.to_array(), done});
    ++steps_;
    if (replay_.size() >= config_.batch_size) {
        auto batch = replay_.sample(config_.batch_size, rng_);
        dqn_train_batch(online_, target_, batch, config_.gamma, config_.learning_rate);
    }
    if (steps_ % config_.target_sync_interval == 0) dqn_sync_target(online_, target_);
}

void DqnAgent::save_policy(std::ostream& out) const {
    PolicyRecord record;
    record.kind = std::string(kind());
    record.tag = "mlp";
    record.config = nlohmann::json(config_);
    record.params.assign(online_.parameters().begin(), online_.parameters().end());
    write_policy(out, record);
}

}  // namespace logguard
