#include "logguard/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace logguard {

Action action_from_index(std::size_t index) {
    if (index >= kActionCount) throw std::out_of_range("action index out of range");
    return static_cast<Action>(index);
}

std::string_view to_string(Action a) {
    switch (a) {
        case Action::Malicious: return "malicious";
        case Action::Benign: return "benign";
        case Action::Investigate: return "investigate";
        case Action::Ignore: return "ignore";
    }
    return "?";
}

std::string_view to_string(Outcome o) {
    switch (o) {
        case Outcome::TruePositive: return "TP";
        case Outcome::FalsePositive: return "FP";
        case Outcome::FalseNegative: return "FN";
        case Outcome::TrueNegative: return "TN";
        case Outcome::Neutral: return "NEUTRAL";
    }
    return "?";
}

double RewardTable::base_reward(Action action, bool is_anomaly) const {
    switch (action) {
        case Action::Malicious: return is_anomaly ? true_positive : false_positive;
        case Action::Benign: return is_anomaly ? false_negative : true_negative;
        case Action::Investigate: return is_anomaly ? investigate_anomaly : investigate_normal;
        case Action::Ignore: return is_anomaly ? false_negative : ignore_normal;
    }
    throw std::invalid_argument("unknown action");
}

void EnvConfig::validate() const {
    if (max_steps < 1) throw std::invalid_argument("max_steps must be at least 1");
    if (!(noise_sd >= 0.0)) throw std::invalid_argument("noise_sd must be nonnegative");
    if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in [0, 1)");
    if (chunk_size == 0) throw std::invalid_argument("chunk_size must be positive");
}

ShortTermMemory::ShortTermMemory(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0) throw std::invalid_argument("short-term memory needs capacity");
}

void ShortTermMemory::push(const std::string& ip) {
    buffer_.push_back(ip);
    ++counts_[ip];
    if (buffer_.size() > capacity_) {
        auto it = counts_.find(buffer_.front());
        if (--it->second == 0) counts_.erase(it);
        buffer_.pop_front();
    }
}

std::size_t ShortTermMemory::count(const std::string& ip) const {
    auto it = counts_.find(ip);
    return it == counts_.end() ? 0 : it->second;
}

double ShortTermMemory::frequency(const std::string& ip) const {
    return std::min(1.0, static_cast<double>(count(ip)) / static_cast<double>(capacity_));
}

int status_code_class(int status) {
    switch (status) {
        case 200: return 0;
        case 401: return 1;
        case 403: return 2;
        default: return 3;
    }
}

StateVector build_state(const LogEntry& entry, const ShortTermMemory& short_term) {
    StateVector s;
    s.ip_freq = short_term.frequency(entry.ip);
    s.status_feature = status_code_class(entry.status);
    s.uri_len_norm = static_cast<double>(entry.uri.size()) / 100.0;
    s.bytes_norm = static_cast<double>(entry.bytes) / 10000.0;
    s.suspicious_ua = is_suspicious_ua(entry.user_agent) ? 1.0 : 0.0;
    return s;
}

Outcome classify_outcome(Action action, bool is_anomaly) {
    switch (action) {
        case Action::Malicious: return is_anomaly ? Outcome::TruePositive : Outcome::FalsePositive;
        case Action::Benign: return is_anomaly ? Outcome::FalseNegative : Outcome::TrueNegative;
        case Action::Investigate: return Outcome::Neutral;
        case Action::Ignore: return is_anomaly ? Outcome::FalseNegative : Outcome::Neutral;
    }
    throw std::invalid_argument("unknown action");
}

Dataset::Dataset(std::vector<LogEntry> entries, std::size_t chunk_size)
    : entries_(std::move(entries)), chunk_size_(chunk_size) {
    if (chunk_size_ == 0) throw std::invalid_argument("chunk_size must be positive");
    for (auto& e : entries_) {
        if (!e.label) e.label = label_entry(e);
    }
    chunk_count_ = (entries_.size() + chunk_size_ - 1) / chunk_size_;
}

Dataset Dataset::load(const std::filesystem::path& log_path, std::size_t chunk_size) {
    auto entries = read_log(log_path);
    auto labels = labels_path_for(log_path);
    if (std::filesystem::exists(labels)) read_labels(labels, entries);
    return Dataset(std::move(entries), chunk_size);
}

std::span<const LogEntry> Dataset::chunk(std::size_t index) const {
    if (index >= chunk_count_) throw std::out_of_range("chunk index out of range");
    std::size_t begin = index * chunk_size_;
    return std::span<const LogEntry>(entries_).subspan(begin, std::min(chunk_size_, entries_.size() - begin));
}

LogEnvironment::LogEnvironment(std::shared_ptr<const Dataset> data, EnvConfig config)
    : data_(std::move(data)), config_(config), rng_(config.seed), noise_(0.0, config.noise_sd > 0.0 ? config.noise_sd : 1.0) {
    config_.validate();
    if (!data_) throw std::invalid_argument("environment needs a dataset");
}

Observation LogEnvironment::observe_cursor() const {
    if (cursor_ >= chunk_.size()) return {};
    const LogEntry& e = chunk_[cursor_];
    return {build_state(e, memory_), &e};
}

Observation LogEnvironment::reset() {
    if (data_->size() == 0) throw std::runtime_error("cannot reset on an empty dataset");
    chunk_index_ =
        std::uniform_int_distribution<std::size_t>(0, data_->chunk_count() - 1)(rng_);
    chunk_ = data_->chunk(chunk_index_);
    // Start where a full episode fits whenever the chunk allows it.
    std::size_t last_start =
        chunk_.size() > config_.max_steps ? chunk_.size() - config_.max_steps : 0;
    cursor_ = std::uniform_int_distribution<std::size_t>(0, last_start)(rng_);
    steps_ = 0;
    done_ = false;
    started_ = true;
    current_ = observe_cursor();
    return current_;
}

StepResult LogEnvironment::step(Action action) {
    if (!started_ || done_) throw std::logic_error("step() called on a finished episode; call reset()");
    const LogEntry& entry = chunk_[cursor_];
    const bool is_anomaly = entry.label.value_or(false);

    StepResult result;
    result.is_anomaly = is_anomaly;
    result.outcome = classify_outcome(action, is_anomaly);
    result.base_reward = config_.rewards.base_reward(action, is_anomaly);
    result.reward = result.base_reward;
    if (config_.noise_enabled && config_.noise_sd > 0.0) result.reward += noise_(rng_);

    memory_.push(entry.ip);
    ++cursor_;
    ++steps_;
    done_ = steps_ >= config_.max_steps || cursor_ >= chunk_.size();
    current_ = observe_cursor();
    result.next = current_;
    result.done = done_;
    return result;
}

}  // namespace logguard
