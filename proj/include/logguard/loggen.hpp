#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "logguard/log_entry.hpp"

namespace logguard {

struct GenConfig {
    std::size_t total_entries = 1'000'000;
    double anomaly_rate = 0.479;
    // Fraction of anomalies that carry an explicit injection URI. The rest are
    // flagged through status, user agent and byte volume.
    double attack_rate = 0.01;
    std::size_t chunk_size = 100'000;
    double time_span_seconds = 24.0 * 3600.0;
    double bytes_noise = 0.05;
    std::int64_t start_time = 1'704'067'200;  // 2024-01-01T00:00:00Z
    // Maximum per-chunk deviation of the anomaly rate before renormalization.
    double chunk_rate_jitter = 0.1;
    std::optional<std::uint64_t> seed;

    void validate() const;  // throws std::invalid_argument
};

struct IpPool {
    std::string cidr;  // e.g. "192.168.0.0/16"
    double weight = 1.0;
};

struct LognormalParams {
    double mu_log = 0.0;
    double sigma_log = 1.0;
};

/// Class-conditional sampling tables for synthetic entries.
struct EntryProfile {
    std::vector<IpPool> normal_ip_pools;
    std::vector<IpPool> anomaly_ip_pools;
    std::vector<std::string> normal_uris;
    // Reconnaissance endpoints used by anomalies without an injection payload.
    std::vector<std::string> probe_uris;
    std::vector<std::string> attack_uris;
    // Weights over {200, 401, 403, 500}.
    std::array<double, 4> normal_status_weights{0.99, 0.0, 0.0, 0.01};
    std::array<double, 4> anomaly_status_weights{0.0, 0.495, 0.495, 0.01};
    LognormalParams normal_bytes{7.824, 0.5};   // median ~2.5 kB
    LognormalParams anomaly_bytes{8.854, 0.6};  // median ~7 kB
    std::vector<std::string> benign_user_agents;
    std::vector<std::string> suspicious_user_agents;
    double normal_suspicious_ua_prob = 0.05;
    double anomaly_suspicious_ua_prob = 0.6;
    std::vector<std::string> benign_referrers;
    std::string malicious_referrer;
    double anomaly_malicious_referrer_prob = 0.3;

    static EntryProfile defaults();
    void validate() const;
};

inline constexpr std::array<int, 4> kGeneratedStatuses{200, 401, 403, 500};

/// Exponential inter-arrival draw in seconds. Never returns 0.
double sample_interarrival(std::mt19937_64& rng, double rate);

/// Seeded synthetic dataset. Entries come back in timestamp order with the
/// ground-truth label set from label_entry.
std::vector<LogEntry> generate_dataset(const GenConfig& config, const EntryProfile& profile);

std::vector<std::span<const LogEntry>> chunk_dataset(std::span<const LogEntry> entries,
                                                     std::size_t chunk_size);

/// Per-chunk anomaly counts: jittered around the global rate, then corrected so
/// they sum to round(rate * total). Exposed for testing.
std::vector<std::size_t> plan_chunk_anomalies(const GenConfig& config, std::mt19937_64& rng);

}  // namespace logguard
