#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "logguard/log_entry.hpp"

namespace logguard {

inline constexpr std::size_t kStateDim = 5;
inline constexpr std::size_t kActionCount = 4;

using StateArray = std::array<double, kStateDim>;

/// Normalized observation of one log entry.
struct StateVector {
    double ip_freq = 0.0;         // occurrences in the recent-IP window / capacity
    double status_feature = 0.0;  // 200 -> 0, 401 -> 1, 403 -> 2, other -> 3
    double uri_len_norm = 0.0;    // len(uri) / 100
    double bytes_norm = 0.0;      // bytes / 10000
    double suspicious_ua = 0.0;   // 1 if the UA matches curl|bot

    StateArray to_array() const {
        return {ip_freq, status_feature, uri_len_norm, bytes_norm, suspicious_ua};
    }
    friend bool operator==(const StateVector&, const StateVector&) = default;
};

enum class Action : std::uint8_t { Malicious = 0, Benign = 1, Investigate = 2, Ignore = 3 };
enum class Outcome : std::uint8_t { TruePositive, FalsePositive, FalseNegative, TrueNegative, Neutral };

constexpr std::size_t index_of(Action a) { return static_cast<std::size_t>(a); }
Action action_from_index(std::size_t index);
std::string_view to_string(Action a);
std::string_view to_string(Outcome o);

struct RewardTable {
    double true_positive = 10.0;
    double false_positive = -60.0;
    double false_negative = -5.0;
    double true_negative = 2.0;
    double investigate_anomaly = 5.0;
    double investigate_normal = -1.0;
    double ignore_normal = 0.0;

    /// Noise-free reward. Ignoring an anomaly is a miss and pays the FN reward.
    double base_reward(Action action, bool is_anomaly) const;
};

struct EnvConfig {
    std::size_t max_steps = 5;
    double gamma = 0.99;  // consumed by agents
    double noise_sd = 0.05;
    bool noise_enabled = true;
    RewardTable rewards;
    std::size_t chunk_size = 100'000;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Bounded FIFO of recent client addresses with O(1) frequency lookup.
class ShortTermMemory {
public:
    static constexpr std::size_t kDefaultCapacity = 100;

    explicit ShortTermMemory(std::size_t capacity = kDefaultCapacity);

    void push(const std::string& ip);
    std::size_t count(const std::string& ip) const;
    double frequency(const std::string& ip) const;  // count / capacity, clamped to 1
    std::size_t size() const { return buffer_.size(); }
    std::size_t capacity() const { return capacity_; }
    const std::deque<std::string>& contents() const { return buffer_; }

private:
    std::size_t capacity_;
    std::deque<std::string> buffer_;
    std::unordered_map<std::string, std::size_t> counts_;
};

int status_code_class(int status);
StateVector build_state(const LogEntry& entry, const ShortTermMemory& short_term);
Outcome classify_outcome(Action action, bool is_anomaly);

/// A labeled dataset split into fixed-size chunks.
class Dataset {
public:
    Dataset(std::vector<LogEntry> entries, std::size_t chunk_size);

    static Dataset load(const std::filesystem::path& log_path, std::size_t chunk_size);

    std::span<const LogEntry> entries() const { return entries_; }
    std::span<const LogEntry> chunk(std::size_t index) const;
    std::size_t chunk_count() const { return chunk_count_; }
    std::size_t chunk_size() const { return chunk_size_; }
    std::size_t size() const { return entries_.size(); }

private:
    std::vector<LogEntry> entries_;
    std::size_t chunk_size_;
    std::size_t chunk_count_;
};

/// What an agent sees before acting: the normalized state plus the raw entry
/// (agents with their own memory rebuild features from it). `entry` is null
/// only past the end of a chunk.
struct Observation {
    StateVector state;
    const LogEntry* entry = nullptr;
};

struct StepResult {
    Observation next;
    double reward = 0.0;
    double base_reward = 0.0;
    bool done = false;
    Outcome outcome = Outcome::Neutral;
    bool is_anomaly = false;
};

/// Log-classification MDP. Each episode starts at a random entry of a random
/// chunk and walks forward entry by entry, one classification per step.
class LogEnvironment {
public:
    LogEnvironment(std::shared_ptr<const Dataset> data, EnvConfig config);

    Observation reset();
    StepResult step(Action action);

    const Observation& observation() const { return current_; }
    std::size_t steps() const { return steps_; }
    bool done() const { return done_; }
    std::size_t current_chunk() const { return chunk_index_; }
    const EnvConfig& config() const { return config_; }
    const ShortTermMemory& short_term() const { return memory_; }

private:
    Observation observe_cursor() const;

    std::shared_ptr<const Dataset> data_;
    EnvConfig config_;
    std::mt19937_64 rng_;
    std::normal_distribution<double> noise_;
    ShortTermMemory memory_;
    std::span<const LogEntry> chunk_;
    std::size_t chunk_index_ = 0;
    std::size_t cursor_ = 0;
    std::size_t steps_ = 0;
    bool done_ = true;
    bool started_ = false;
    Observation current_;
};

}  // namespace logguard
