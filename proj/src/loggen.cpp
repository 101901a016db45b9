#include "logguard/loggen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "logguard/seed.hpp"

namespace logguard {

namespace {

struct ParsedPool {
    std::uint32_t base = 0;
    std::uint32_t size = 1;
};

ParsedPool parse_cidr(const std::string& cidr) {
    auto slash = cidr.find('/');
    if (slash == std::string::npos) throw std::invalid_argument("CIDR without prefix: " + cidr);
    std::uint32_t base = 0;
    std::size_t pos = 0;
    for (int octet = 0; octet < 4; ++octet) {
        std::size_t end = octet < 3 ? cidr.find('.', pos) : slash;
        if (end == std::string::npos || end > slash) throw std::invalid_argument("bad CIDR: " + cidr);
        unsigned value = 0;
        auto [ptr, ec] = std::from_chars(cidr.data() + pos, cidr.data() + end, value);
        if (ec != std::errc{} || ptr != cidr.data() + end || value > 255) {
            throw std::invalid_argument("bad CIDR: " + cidr);
        }
        base = (base << 8) | value;
        pos = end + 1;
    }
    unsigned prefix = 0;
    auto [ptr, ec] = std::from_chars(cidr.data() + slash + 1, cidr.data() + cidr.size(), prefix);
    if (ec != std::errc{} || prefix > 32 || prefix < 8) throw std::invalid_argument("bad CIDR prefix: " + cidr);
    std::uint32_t size = prefix == 32 ? 1u : (1u << (32 - prefix));
    return {base & ~(size - 1), size};
}

std::string dotted(std::uint32_t addr) {
    return std::to_string(addr >> 24) + '.' + std::to_string((addr >> 16) & 0xff) + '.' +
           std::to_string((addr >> 8) & 0xff) + '.' + std::to_string(addr & 0xff);
}

class PoolSampler {
public:
    explicit PoolSampler(const std::vector<IpPool>& pools) {
        std::vector<double> weights;
        for (const auto& p : pools) {
            pools_.push_back(parse_cidr(p.cidr));
            weights.push_back(p.weight);
        }
        pick_ = std::discrete_distribution<std::size_t>(weights.begin(), weights.end());
    }

    std::string operator()(std::mt19937_64& rng) {
        const auto& pool = pools_[pick_(rng)];
        std::uint32_t host = 0;
        if (pool.size > 2) {
            // skip network and broadcast addresses
            host = std::uniform_int_distribution<std::uint32_t>(1, pool.size - 2)(rng);
        }
        return dotted(pool.base + host);
    }

private:
    std::vector<ParsedPool> pools_;
    std::discrete_distribution<std::size_t> pick_;
};

template <typename T>
const T& pick(const std::vector<T>& items, std::mt19937_64& rng) {
    return items[std::uniform_int_distribution<std::size_t>(0, items.size() - 1)(rng)];
}

bool coin(std::mt19937_64& rng, double p) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

void check_fraction(double value, const char* name) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
    }
}

struct ChunkSampler {
    const GenConfig& config;
    const EntryProfile& profile;
    PoolSampler normal_ips;
    PoolSampler anomaly_ips;
    std::discrete_distribution<std::size_t> normal_status;
    std::discrete_distribution<std::size_t> anomaly_status;

    ChunkSampler(const GenConfig& c, const EntryProfile& p)
        : config(c),
          profile(p),
          normal_ips(p.normal_ip_pools),
          anomaly_ips(p.anomaly_ip_pools),
          normal_status(p.normal_status_weights.begin(), p.normal_status_weights.end()),
          anomaly_status(p.anomaly_status_weights.begin(), p.anomaly_status_weights.end()) {}

    std::uint64_t draw_bytes(std::mt19937_64& rng, const LognormalParams& params) {
        double base = std::lognormal_distribution<double>(params.mu_log, params.sigma_log)(rng);
        double jitter =
            std::uniform_real_distribution<double>(-config.bytes_noise, config.bytes_noise)(rng);
        return static_cast<std::uint64_t>(std::llround(base * (1.0 + jitter)));
    }

    LogEntry make(std::mt19937_64& rng, bool anomalous) {
        LogEntry e;
        e.method = "GET";
        if (!anomalous) {
            e.ip = normal_ips(rng);
            e.uri = pick(profile.normal_uris, rng);
            e.status = kGeneratedStatuses[normal_status(rng)];
            e.bytes = draw_bytes(rng, profile.normal_bytes);
            e.referrer = pick(profile.benign_referrers, rng);
            e.user_agent = coin(rng, profile.normal_suspicious_ua_prob)
                               ? pick(profile.suspicious_user_agents, rng)
                               : pick(profile.benign_user_agents, rng);
        } else {
            e.ip = anomaly_ips(rng);
            bool attack = coin(rng, config.attack_rate);
            e.status = kGeneratedStatuses[anomaly_status(rng)];
            // A 500 alone does not mark an entry anomalous; such entries are
            // failed injection attempts and carry the payload.
            if (e.status == 500 || e.status == 200) attack = true;
            e.uri = attack ? pick(profile.attack_uris, rng) : pick(profile.probe_uris, rng);
            e.bytes = draw_bytes(rng, profile.anomaly_bytes);
            e.referrer = coin(rng, profile.anomaly_malicious_referrer_prob)
                             ? profile.malicious_referrer
                             : pick(profile.benign_referrers, rng);
            e.user_agent = coin(rng, profile.anomaly_suspicious_ua_prob)
                               ? pick(profile.suspicious_user_agents, rng)
                               : pick(profile.benign_user_agents, rng);
        }
        e.label = label_entry(e, profile.attack_uris);
        if (*e.label != anomalous) {
            throw std::logic_error("profile produced an entry the labeler disagrees with: " + e.uri);
        }
        return e;
    }
};

}  // namespace

void GenConfig::validate() const {
    if (total_entries == 0) throw std::invalid_argument("total_entries must be positive");
    check_fraction(anomaly_rate, "anomaly_rate");
    check_fraction(attack_rate, "attack_rate");
    check_fraction(bytes_noise, "bytes_noise");
    if (chunk_size == 0) throw std::invalid_argument("chunk_size must be positive");
    if (chunk_size > total_entries) {
        throw std::invalid_argument("chunk_size must not exceed total_entries");
    }
    if (!(time_span_seconds > 0.0)) throw std::invalid_argument("time_span must be positive");
    if (!(chunk_rate_jitter >= 0.0 && chunk_rate_jitter <= 1.0)) {
        throw std::invalid_argument("chunk_rate_jitter must lie in [0, 1]");
    }
    if (!seed) throw std::invalid_argument("a seed is required for dataset generation");
}

EntryProfile EntryProfile::defaults() {
    EntryProfile p;
    p.normal_ip_pools = {{"192.168.0.0/16", 0.6}, {"10.0.0.0/8", 0.3}, {"203.0.113.0/24", 0.1}};
    p.anomaly_ip_pools = {{"198.51.100.0/28", 0.7}, {"203.0.113.0/24", 0.3}};
    p.normal_uris = {"/index.html",        "/about.html",     "/products",
                     "/products?id=42",    "/contact",        "/images/logo.png",
                     "/css/site.css",      "/js/app.js",      "/api/v1/items?page=2",
                     "/blog/2024/01/hello", "/search?q=shoes", "/cart"};
    p.probe_uris = {"/admin", "/login", "/wp-admin", "/config.php", "/.env", "/server-status"};
    p.attack_uris = {"/admin?' OR 1=1 --",
                     "/login?user=admin'--",
                     "/search?q=<script>alert(1)</script>",
                     "/products?id=1' OR 1=1",
                     "/static/../../etc/passwd",
                     "/api/v1/items?id=1;DROP TABLE users--"};
    p.benign_user_agents = {"Mozilla/5.0 (Windows NT 10.0; Win64; x64) AppleWebKit/537.36",
                            "Mozilla/5.0 (Macintosh; Intel Mac OS X 13_4) Safari/605.1.15",
                            "Mozilla/5.0 (X11; Linux x86_64; rv:121.0) Gecko/20100101 Firefox/121.0",
                            "Mozilla/5.0 (iPhone; CPU iPhone OS 17_1 like Mac OS X) Mobile/15E148"};
    p.suspicious_user_agents = {"curl/7.68.0", "Googlebot/2.1 (+http://www.google.com/bot.html)",
                                "python-requests/2.31 scanbot", "sqlmap-bot/1.7"};
    p.benign_referrers = {"", "https://www.google.com/", "https://example.com/home"};
    p.malicious_referrer = "http://malicious-site.com/";
    return p;
}

void EntryProfile::validate() const {
    auto nonempty = [](const auto& v, const char* name) {
        if (v.empty()) throw std::invalid_argument(std::string("profile.") + name + " is empty");
    };
    nonempty(normal_ip_pools, "normal_ip_pools");
    nonempty(anomaly_ip_pools, "anomaly_ip_pools");
    nonempty(normal_uris, "normal_uris");
    nonempty(probe_uris, "probe_uris");
    nonempty(attack_uris, "attack_uris");
    nonempty(benign_user_agents, "benign_user_agents");
    nonempty(suspicious_user_agents, "suspicious_user_agents");
    nonempty(benign_referrers, "benign_referrers");
    for (const auto& uri : attack_uris) {
        if (!matches_injection_pattern(uri)) {
            throw std::invalid_argument("attack URI does not match an injection pattern: " + uri);
        }
    }
    for (const auto* set : {&normal_uris, &probe_uris}) {
        for (const auto& uri : *set) {
            if (matches_injection_pattern(uri)) {
                throw std::invalid_argument("benign/probe URI matches an injection pattern: " + uri);
            }
        }
    }
    if (normal_status_weights[1] > 0 || normal_status_weights[2] > 0) {
        throw std::invalid_argument("normal entries cannot draw 401/403");
    }
    if (anomaly_status_weights[1] + anomaly_status_weights[2] <= 0) {
        throw std::invalid_argument("anomalous entries need 401/403 weight");
    }
}

double sample_interarrival(std::mt19937_64& rng, double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate)) {
        throw std::invalid_argument("inter-arrival rate must be positive and finite");
    }
    std::exponential_distribution<double> dist(rate);
    double gap = 0.0;
    while (!(gap > 0.0)) gap = dist(rng);
    return gap;
}

std::vector<std::size_t> plan_chunk_anomalies(const GenConfig& config, std::mt19937_64& rng) {
    const std::size_t n = config.total_entries;
    const std::size_t chunk = config.chunk_size;
    const std::size_t chunks = (n + chunk - 1) / chunk;
    std::vector<double> sizes(chunks);
    for (std::size_t c = 0; c < chunks; ++c) {
        sizes[c] = static_cast<double>(std::min(chunk, n - c * chunk));
    }

    const auto target = static_cast<std::size_t>(std::llround(config.anomaly_rate * static_cast<double>(n)));
    std::uniform_real_distribution<double> jitter(-config.chunk_rate_jitter, config.chunk_rate_jitter);
    std::vector<double> rates(chunks);
    for (auto& r : rates) r = std::clamp(config.anomaly_rate + jitter(rng), 0.0, 1.0);

    // Shift unsaturated chunks until the expected total hits the target.
    for (int iter = 0; iter < 200; ++iter) {
        double total = std::inner_product(sizes.begin(), sizes.end(), rates.begin(), 0.0);
        double diff = static_cast<double>(target) - total;
        if (std::abs(diff) < 1e-9) break;
        double capacity = 0.0;
        for (std::size_t c = 0; c < chunks; ++c) {
            if ((diff > 0 && rates[c] < 1.0) || (diff < 0 && rates[c] > 0.0)) capacity += sizes[c];
        }
        if (capacity == 0.0) break;
        for (std::size_t c = 0; c < chunks; ++c) {
            if ((diff > 0 && rates[c] < 1.0) || (diff < 0 && rates[c] > 0.0)) {
                rates[c] = std::clamp(rates[c] + diff / capacity, 0.0, 1.0);
            }
        }
    }

    std::vector<std::size_t> counts(chunks);
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < chunks; ++c) {
        counts[c] = std::min(static_cast<std::size_t>(std::llround(sizes[c] * rates[c])),
                             static_cast<std::size_t>(sizes[c]));
        assigned += counts[c];
    }
    // Integer rounding residue, spread one at a time.
    for (std::size_t c = 0; assigned < target; c = (c + 1) % chunks) {
        if (counts[c] < sizes[c]) {
            ++counts[c];
            ++assigned;
        }
    }
    for (std::size_t c = 0; assigned > target; c = (c + 1) % chunks) {
        if (counts[c] > 0) {
            --counts[c];
            --assigned;
        }
    }
    return counts;
}

std::vector<LogEntry> generate_dataset(const GenConfig& config, const EntryProfile& profile) {
    config.validate();
    profile.validate();

    std::mt19937_64 master(*config.seed);
    const auto plan = plan_chunk_anomalies(config, master);
    const double rate = static_cast<double>(config.total_entries) / config.time_span_seconds;

    std::vector<LogEntry> entries;
    entries.reserve(config.total_entries);
    ChunkSampler sampler(config, profile);
    double clock = 0.0;

    // Each chunk draws from its own sub-seeded stream, so chunks are
    // independent of one another given (seed, chunk index).
    for (std::size_t c = 0; c < plan.size(); ++c) {
        std::mt19937_64 rng(derive_seed(*config.seed, SeedStream::GenChunk, c));
        const std::size_t begin = c * config.chunk_size;
        const std::size_t size = std::min(config.chunk_size, config.total_entries - begin);

        std::vector<char> anomalous(size, 0);
        std::fill_n(anomalous.begin(), plan[c], 1);
        std::shuffle(anomalous.begin(), anomalous.end(), rng);

        for (std::size_t i = 0; i < size; ++i) {
            clock += sample_interarrival(rng, rate);
            LogEntry e = sampler.make(rng, anomalous[i] != 0);
            e.timestamp = config.start_time + static_cast<std::int64_t>(std::floor(clock));
            entries.push_back(std::move(e));
        }
    }
    return entries;
}

std::vector<std::span<const LogEntry>> chunk_dataset(std::span<const LogEntry> entries,
                                                     std::size_t chunk_size) {
    if (chunk_size == 0) throw std::invalid_argument("chunk_size must be positive");
    std::vector<std::span<const LogEntry>> chunks;
    for (std::size_t begin = 0; begin < entries.size(); begin += chunk_size) {
        chunks.push_back(entries.subspan(begin, std::min(chunk_size, entries.size() - begin)));
    }
    return chunks;
}

}  // namespace logguard
