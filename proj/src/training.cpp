#include "logguard/training.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "logguard/dqn.hpp"
#include "logguard/logguardq.hpp"
#include "logguard/ppo.hpp"
#include "logguard/seed.hpp"

namespace logguard {

bool is_agent_kind(std::string_view kind) {
    return std::find(std::begin(kAgentKinds), std::end(kAgentKinds), kind) != std::end(kAgentKinds);
}

std::vector<EpisodeRecord> run_training(Agent& agent, LogEnvironment& env, std::size_t episodes) {
    std::vector<EpisodeRecord> records;
    records.reserve(episodes);
    agent.begin_run(episodes);
    for (std::size_t ep = 0; ep < episodes; ++ep) {
        agent.begin_episode(ep);
        EpisodeRecord record;
        record.episode = ep;
        Observation obs = env.reset();
        bool done = false;
        while (!done) {
            const Action action = agent.act(obs);
            StepResult res = env.step(action);
            agent.observe(obs, action, res.reward, res.next, res.done);
            record.record(action, res.outcome, res.reward);
            obs = res.next;
            done = res.done;
        }
        agent.end_episode();
        records.push_back(record);
    }
    return records;
}

RunConfig resolve_run_config(const RunConfig& config, std::size_t run_index) {
    RunConfig r = config;
    r.env.seed = derive_seed(config.seed, SeedStream::Env, run_index);
    const auto agent_seed = derive_seed(config.seed, SeedStream::Agent, run_index);
    r.agent.seed = agent_seed;
    r.dqn.seed = agent_seed;
    r.ppo.seed = agent_seed;
    r.env.chunk_size = std::max<std::size_t>(r.env.chunk_size, 1);
    return r;
}

std::unique_ptr<Agent> make_agent(std::string_view kind, const RunConfig& resolved) {
    if (kind == "logguardq") return std::make_unique<LogGuardQAgent>(resolved.agent);
    if (kind == "dqn") return std::make_unique<DqnAgent>(resolved.dqn);
    if (kind == "ppo") return std::make_unique<PpoAgent>(resolved.ppo);
    throw std::invalid_argument("unknown agent kind '" + std::string(kind) + "' (expected logguardq, dqn or ppo)");
}

void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min(jobs, count);
    if (jobs <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> workers;
    for (std::size_t w = 0; w < jobs; ++w) {
        workers.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : workers) t.join();
    if (failure) std::rethrow_exception(failure);
}

std::vector<RunResult> train_runs(std::string_view kind, const RunConfig& config,
                                  std::shared_ptr<const Dataset> data, std::size_t runs,
                                  std::size_t episodes, std::size_t jobs) {
    if (!is_agent_kind(kind)) make_agent(kind, config);  // throws with the message
    std::vector<RunResult> results(runs);
    parallel_for(runs, jobs, [&](std::size_t k) {
        RunResult& out = results[k];
        out.run_index = k;
        out.config = resolve_run_config(config, k);
        LogEnvironment env(data, out.config.env);
        auto agent = make_agent(kind, out.config);
        out.records = run_training(*agent, env, episodes);
        std::ostringstream policy;
        agent->save_policy(policy);
        out.policy = policy.str();
    });
    return results;
}

}  // namespace logguard
