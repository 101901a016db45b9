#pragma once

#include <cstddef>
#include <ostream>
#include <string_view>

#include "logguard/env.hpp"

namespace logguard {

/// Common protocol for every learner driven by the training loop.
class Agent {
public:
    virtual ~Agent() = default;

    virtual std::string_view kind() const = 0;

    // `total_episodes` lets schedules that span the whole run plan ahead.
    virtual void begin_run(std::size_t total_episodes) { (void)total_episodes; }
    virtual void begin_episode(std::size_t episode) = 0;
    virtual Action act(const Observation& obs) = 0;
    virtual void observe(const Observation& obs, Action action, double reward,
                         const Observation& next, bool done) = 0;
    virtual void end_episode() {}

    virtual void save_policy(std::ostream& out) const = 0;
};

}  // namespace logguard
