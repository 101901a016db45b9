#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "logguard/dqn.hpp"
#include "logguard/env.hpp"
#include "logguard/loggen.hpp"
#include "logguard/logguardq.hpp"
#include "logguard/ppo.hpp"

namespace logguard {

inline constexpr int kSchemaVersion = 1;

struct ProtocolConfig {
    std::size_t episodes = 20'000;
    std::size_t runs = 10;
    double significance = 0.01;
    std::size_t savgol_window = 501;
    std::size_t savgol_poly = 2;
    // Worker threads for independent runs; 0 means hardware concurrency.
    std::size_t jobs = 0;

    void validate() const;
};

struct SensitivityConfig {
    double temperature_min = 0.8;
    double temperature_max = 1.2;
    double curiosity_min = 0.5;
    double curiosity_max = 1.5;
    std::size_t grid = 3;  // points per axis
    std::size_t episodes = 2'000;

    void validate() const;
};

/// Everything a command needs. Sections mirror the JSON file layout:
/// {"seed", "output_dir", "dataset", "loggen", "env", "agent", "dqn", "ppo",
///  "protocol", "sensitivity"}. Missing keys keep their defaults; unknown keys
/// are rejected.
struct RunConfig {
    std::uint64_t seed = 42;
    std::string output_dir = "out";
    std::string dataset = "data/access.log";
    GenConfig loggen;
    EnvConfig env;
    AgentConfig agent;
    DqnConfig dqn;
    PpoConfig ppo;
    ProtocolConfig protocol;
    SensitivityConfig sensitivity;

    void validate() const;
};

RunConfig load_run_config(const std::filesystem::path& path);

void to_json(nlohmann::json& j, const GenConfig& c);
void from_json(const nlohmann::json& j, GenConfig& c);
void to_json(nlohmann::json& j, const RewardTable& c);
void from_json(const nlohmann::json& j, RewardTable& c);
void to_json(nlohmann::json& j, const EnvConfig& c);
void from_json(const nlohmann::json& j, EnvConfig& c);
void to_json(nlohmann::json& j, const AgentConfig& c);
void from_json(const nlohmann::json& j, AgentConfig& c);
void to_json(nlohmann::json& j, const DqnConfig& c);
void from_json(const nlohmann::json& j, DqnConfig& c);
void to_json(nlohmann::json& j, const PpoConfig& c);
void from_json(const nlohmann::json& j, PpoConfig& c);
void to_json(nlohmann::json& j, const ProtocolConfig& c);
void from_json(const nlohmann::json& j, ProtocolConfig& c);
void to_json(nlohmann::json& j, const SensitivityConfig& c);
void from_json(const nlohmann::json& j, SensitivityConfig& c);
void to_json(nlohmann::json& j, const RunConfig& c);
void from_json(const nlohmann::json& j, RunConfig& c);

void to_json(nlohmann::json& j, PlasticityMode m);
void from_json(const nlohmann::json& j, PlasticityMode& m);
void to_json(nlohmann::json& j, ExplorationMode m);
void from_json(const nlohmann::json& j, ExplorationMode& m);
void to_json(nlohmann::json& j, MemoryMode m);
void from_json(const nlohmann::json& j, MemoryMode& m);

}  // namespace logguard
