#include "logguard/config.hpp"

#include <fstream>
#include <initializer_list>
#include <set>
#include <stdexcept>
#include <string_view>

namespace logguard {

using nlohmann::json;

namespace {

void check_keys(const json& j, std::string_view section, std::initializer_list<std::string_view> known) {
    if (!j.is_object()) throw std::invalid_argument("config section '" + std::string(section) + "' must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool found = false;
        for (auto k : known) found = found || it.key() == k;
        if (!found) {
            throw std::invalid_argument("unknown config key '" + it.key() + "' in section '" + std::string(section) + "'");
        }
    }
}

template <class T>
void read(const json& j, const char* key, T& out) {
    auto it = j.find(key);
    if (it == j.end()) return;
    try {
        out = it->get<T>();
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config key '") + key + "': " + e.what());
    }
}

template <class Enum>
Enum parse_enum(const json& j, std::initializer_list<std::pair<std::string_view, Enum>> names) {
    const auto s = j.get<std::string>();
    for (auto& [name, value] : names) {
        if (s == name) return value;
    }
    throw std::invalid_argument("unknown mode '" + s + "'");
}

}  // namespace

void ProtocolConfig::validate() const {
    if (episodes == 0 || runs == 0) throw std::invalid_argument("protocol needs positive episodes and runs");
    if (!(significance > 0.0 && significance < 1.0)) throw std::invalid_argument("significance must lie in (0, 1)");
    if (savgol_window % 2 == 0) throw std::invalid_argument("savgol_window must be odd");
    if (savgol_poly >= savgol_window) throw std::invalid_argument("savgol_poly must be below savgol_window");
}

void SensitivityConfig::validate() const {
    if (grid < 2) throw std::invalid_argument("sensitivity grid needs at least two points per axis");
    if (episodes == 0) throw std::invalid_argument("sensitivity episodes must be positive");
    if (!(temperature_min > 0.0 && temperature_max > temperature_min)) {
        throw std::invalid_argument("sensitivity temperature range must be positive and increasing");
    }
    if (!(curiosity_min > 0.0 && curiosity_max > curiosity_min)) {
        throw std::invalid_argument("sensitivity curiosity range must be positive and increasing");
    }
}

void RunConfig::validate() const {
    env.validate();
    agent.validate();
    dqn.validate();
    ppo.validate();
    protocol.validate();
    sensitivity.validate();
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config " + path.string() + ": " + e.what());
    }
    auto config = j.get<RunConfig>();
    config.validate();
    return config;
}

void to_json(json& j, PlasticityMode m) { j = std::string(to_string(m)); }
void from_json(const json& j, PlasticityMode& m) {
    m = parse_enum<PlasticityMode>(j, {{"schedule", PlasticityMode::Schedule}, {"variance", PlasticityMode::Variance}});
}
void to_json(json& j, ExplorationMode m) { j = std::string(to_string(m)); }
void from_json(const json& j, ExplorationMode& m) {
    m = parse_enum<ExplorationMode>(j, {{"softmax", ExplorationMode::Softmax},
                                        {"eps_greedy", ExplorationMode::EpsGreedy},
                                        {"adaptive_eps", ExplorationMode::AdaptiveEps}});
}
void to_json(json& j, MemoryMode m) { j = std::string(to_string(m)); }
void from_json(const json& j, MemoryMode& m) {
    m = parse_enum<MemoryMode>(j, {{"bounded", MemoryMode::Bounded}, {"global_counts", MemoryMode::GlobalCounts}});
}

void to_json(json& j, const GenConfig& c) {
    j = json{{"total_entries", c.total_entries},
             {"anomaly_rate", c.anomaly_rate},
             {"attack_rate", c.attack_rate},
             {"chunk_size", c.chunk_size},
             {"time_span_seconds", c.time_span_seconds},
             {"bytes_noise", c.bytes_noise},
             {"start_time", c.start_time},
             {"chunk_rate_jitter", c.chunk_rate_jitter}};
    j["seed"] = c.seed ? json(*c.seed) : json(nullptr);
}
void from_json(const json& j, GenConfig& c) {
    check_keys(j, "loggen", {"total_entries", "anomaly_rate", "attack_rate", "chunk_size", "time_span_seconds",
                             "bytes_noise", "start_time", "chunk_rate_jitter", "seed"});
    read(j, "total_entries", c.total_entries);
    read(j, "anomaly_rate", c.anomaly_rate);
    read(j, "attack_rate", c.attack_rate);
    read(j, "chunk_size", c.chunk_size);
    read(j, "time_span_seconds", c.time_span_seconds);
    read(j, "bytes_noise", c.bytes_noise);
    read(j, "start_time", c.start_time);
    read(j, "chunk_rate_jitter", c.chunk_rate_jitter);
    if (auto it = j.find("seed"); it != j.end()) {
        c.seed = it->is_null() ? std::nullopt : std::optional<std::uint64_t>(it->get<std::uint64_t>());
    }
}

void to_json(json& j, const RewardTable& c) {
    j = json{{"true_positive", c.true_positive},   {"false_positive", c.false_positive},
             {"false_negative", c.false_negative}, {"true_negative", c.true_negative},
             {"investigate_anomaly", c.investigate_anomaly}, {"investigate_normal", c.investigate_normal},
             {"ignore_normal", c.ignore_normal}};
}
void from_json(const json& j, RewardTable& c) {
    check_keys(j, "env.rewards", {"true_positive", "false_positive", "false_negative", "true_negative",
                                  "investigate_anomaly", "investigate_normal", "ignore_normal"});
    read(j, "true_positive", c.true_positive);
    read(j, "false_positive", c.false_positive);
    read(j, "false_negative", c.false_negative);
    read(j, "true_negative", c.true_negative);
    read(j, "investigate_anomaly", c.investigate_anomaly);
    read(j, "investigate_normal", c.investigate_normal);
    read(j, "ignore_normal", c.ignore_normal);
}

void to_json(json& j, const EnvConfig& c) {
    j = json{{"max_steps", c.max_steps}, {"gamma", c.gamma},     {"noise_sd", c.noise_sd},
             {"noise_enabled", c.noise_enabled}, {"rewards", c.rewards}, {"chunk_size", c.chunk_size},
             {"seed", c.seed}};
}
void from_json(const json& j, EnvConfig& c) {
    check_keys(j, "env", {"max_steps", "gamma", "noise_sd", "noise_enabled", "rewards", "chunk_size", "seed"});
    read(j, "max_steps", c.max_steps);
    read(j, "gamma", c.gamma);
    read(j, "noise_sd", c.noise_sd);
    read(j, "noise_enabled", c.noise_enabled);
    read(j, "rewards", c.rewards);
    read(j, "chunk_size", c.chunk_size);
    read(j, "seed", c.seed);
}

void to_json(json& j, const AgentConfig& c) {
    j = json{{"gamma", c.gamma},
             {"initial_learning_rate", c.initial_learning_rate},
             {"learning_rate_decay", c.learning_rate_decay},
             {"min_learning_rate", c.min_learning_rate},
             {"initial_temperature", c.initial_temperature},
             {"temperature_decay", c.temperature_decay},
             {"min_temperature", c.min_temperature},
             {"plasticity_mode", c.plasticity_mode},
             {"plasticity_k", c.plasticity_k},
             {"curiosity_enabled", c.curiosity_enabled},
             {"curiosity_weight", c.curiosity_weight},
             {"penalty_prob", c.penalty_prob},
             {"penalty_value", c.penalty_value},
             {"exploration_mode", c.exploration_mode},
             {"memory_mode", c.memory_mode},
             {"weight_init_sd", c.weight_init_sd},
             {"memory_capacity", c.memory_capacity},
             {"seed", c.seed}};
}
void from_json(const json& j, AgentConfig& c) {
    check_keys(j, "agent", {"gamma", "initial_learning_rate", "learning_rate_decay", "min_learning_rate",
                            "initial_temperature", "temperature_decay", "min_temperature", "plasticity_mode",
                            "plasticity_k", "curiosity_enabled", "curiosity_weight", "penalty_prob",
                            "penalty_value", "exploration_mode", "memory_mode", "weight_init_sd",
                            "memory_capacity", "seed"});
    read(j, "gamma", c.gamma);
    read(j, "initial_learning_rate", c.initial_learning_rate);
    read(j, "learning_rate_decay", c.learning_rate_decay);
    read(j, "min_learning_rate", c.min_learning_rate);
    read(j, "initial_temperature", c.initial_temperature);
    read(j, "temperature_decay", c.temperature_decay);
    read(j, "min_temperature", c.min_temperature);
    read(j, "plasticity_mode", c.plasticity_mode);
    read(j, "plasticity_k", c.plasticity_k);
    read(j, "curiosity_enabled", c.curiosity_enabled);
    read(j, "curiosity_weight", c.curiosity_weight);
    read(j, "penalty_prob", c.penalty_prob);
    read(j, "penalty_value", c.penalty_value);
    read(j, "exploration_mode", c.exploration_mode);
    read(j, "memory_mode", c.memory_mode);
    read(j, "weight_init_sd", c.weight_init_sd);
    read(j, "memory_capacity", c.memory_capacity);
    read(j, "seed", c.seed);
}

void to_json(json& j, const DqnConfig& c) {
    j = json{{"hidden", c.hidden},
             {"gamma", c.gamma},
             {"learning_rate", c.learning_rate},
             {"batch_size", c.batch_size},
             {"buffer_capacity", c.buffer_capacity},
             {"target_sync_interval", c.target_sync_interval},
             {"epsilon_start", c.epsilon_start},
             {"epsilon_end", c.epsilon_end},
             {"epsilon_decay_rate", c.epsilon_decay_rate},
             {"seed", c.seed}};
}
void from_json(const json& j, DqnConfig& c) {
    check_keys(j, "dqn", {"hidden", "gamma", "learning_rate", "batch_size", "buffer_capacity",
                          "target_sync_interval", "epsilon_start", "epsilon_end", "epsilon_decay_rate", "seed"});
    read(j, "hidden", c.hidden);
    read(j, "gamma", c.gamma);
    read(j, "learning_rate", c.learning_rate);
    read(j, "batch_size", c.batch_size);
    read(j, "buffer_capacity", c.buffer_capacity);
    read(j, "target_sync_interval", c.target_sync_interval);
    read(j, "epsilon_start", c.epsilon_start);
    read(j, "epsilon_end", c.epsilon_end);
    read(j, "epsilon_decay_rate", c.epsilon_decay_rate);
    read(j, "seed", c.seed);
}

void to_json(json& j, const PpoConfig& c) {
    j = json{{"hidden", c.hidden},
             {"gamma", c.gamma},
             {"learning_rate", c.learning_rate},
             {"clip_eps", c.clip_eps},
             {"rollout_steps", c.rollout_steps},
             {"epochs", c.epochs},
             {"minibatch_size", c.minibatch_size},
             {"value_coef", c.value_coef},
             {"entropy_coef", c.entropy_coef},
             {"seed", c.seed}};
}
void from_json(const json& j, PpoConfig& c) {
    check_keys(j, "ppo", {"hidden", "gamma", "learning_rate", "clip_eps", "rollout_steps", "epochs",
                          "minibatch_size", "value_coef", "entropy_coef", "seed"});
    read(j, "hidden", c.hidden);
    read(j, "gamma", c.gamma);
    read(j, "learning_rate", c.learning_rate);
    read(j, "clip_eps", c.clip_eps);
    read(j, "rollout_steps", c.rollout_steps);
    read(j, "epochs", c.epochs);
    read(j, "minibatch_size", c.minibatch_size);
    read(j, "value_coef", c.value_coef);
    read(j, "entropy_coef", c.entropy_coef);
    read(j, "seed", c.seed);
}

void to_json(json& j, const ProtocolConfig& c) {
    j = json{{"episodes", c.episodes},          {"runs", c.runs},
             {"significance", c.significance},  {"savgol_window", c.savgol_window},
             {"savgol_poly", c.savgol_poly},    {"jobs", c.jobs}};
}
void from_json(const json& j, ProtocolConfig& c) {
    check_keys(j, "protocol", {"episodes", "runs", "significance", "savgol_window", "savgol_poly", "jobs"});
    read(j, "episodes", c.episodes);
    read(j, "runs", c.runs);
    read(j, "significance", c.significance);
    read(j, "savgol_window", c.savgol_window);
    read(j, "savgol_poly", c.savgol_poly);
    read(j, "jobs", c.jobs);
}

void to_json(json& j, const SensitivityConfig& c) {
    j = json{{"temperature_min", c.temperature_min}, {"temperature_max", c.temperature_max},
             {"curiosity_min", c.curiosity_min},     {"curiosity_max", c.curiosity_max},
             {"grid", c.grid},                       {"episodes", c.episodes}};
}
void from_json(const json& j, SensitivityConfig& c) {
    check_keys(j, "sensitivity",
               {"temperature_min", "temperature_max", "curiosity_min", "curiosity_max", "grid", "episodes"});
    read(j, "temperature_min", c.temperature_min);
    read(j, "temperature_max", c.temperature_max);
    read(j, "curiosity_min", c.curiosity_min);
    read(j, "curiosity_max", c.curiosity_max);
    read(j, "grid", c.grid);
    read(j, "episodes", c.episodes);
}

void to_json(json& j, const RunConfig& c) {
    j = json{{"seed", c.seed},     {"output_dir", c.output_dir}, {"dataset", c.dataset},
             {"loggen", c.loggen}, {"env", c.env},               {"agent", c.agent},
             {"dqn", c.dqn},       {"ppo", c.ppo},               {"protocol", c.protocol},
             {"sensitivity", c.sensitivity}};
}
void from_json(const json& j, RunConfig& c) {
    check_keys(j, "root", {"seed", "output_dir", "dataset", "loggen", "env", "agent", "dqn", "ppo", "protocol",
                           "sensitivity", "schema_version"});
    if (auto it = j.find("schema_version"); it != j.end() && it->get<int>() != kSchemaVersion) {
        throw std::invalid_argument("unsupported config schema_version " + it->dump());
    }
    read(j, "seed", c.seed);
    read(j, "output_dir", c.output_dir);
    read(j, "dataset", c.dataset);
    read(j, "loggen", c.loggen);
    read(j, "env", c.env);
    read(j, "agent", c.agent);
    read(j, "dqn", c.dqn);
    read(j, "ppo", c.ppo);
    read(j, "protocol", c.protocol);
    read(j, "sensitivity", c.sensitivity);
}

}  // namespace logguard
