#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "logguard/agent.hpp"
#include "logguard/config.hpp"
#include "logguard/env.hpp"
#include "logguard/metrics.hpp"

namespace logguard {

inline constexpr std::string_view kAgentKinds[] = {"logguardq", "dqn", "ppo"};
bool is_agent_kind(std::string_view kind);

/// Drives `episodes` episodes of agent-environment interaction.
std::vector<EpisodeRecord> run_training(Agent& agent, LogEnvironment& env, std::size_t episodes);

/// Config with the per-run seeds filled in: env and agent seeds are derived
/// from (config.seed, run_index), so runs are independent and reproducible.
RunConfig resolve_run_config(const RunConfig& config, std::size_t run_index);

std::unique_ptr<Agent> make_agent(std::string_view kind, const RunConfig& resolved);

struct RunResult {
    std::size_t run_index = 0;
    RunConfig config;  // resolved
    std::vector<EpisodeRecord> records;
    std::string policy;  // serialized policy text
};

/// Trains `runs` independent copies of `kind` on `data`, at most `jobs` at a
/// time (0 = hardware concurrency). Results are ordered by run index and do
/// not depend on the job count.
std::vector<RunResult> train_runs(std::string_view kind, const RunConfig& config,
                                  std::shared_ptr<const Dataset> data, std::size_t runs,
                                  std::size_t episodes, std::size_t jobs = 0);

/// Runs fn(0..count-1) on up to `jobs` threads; rethrows the first failure.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn);

}  // namespace logguard
