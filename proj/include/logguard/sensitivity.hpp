#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace logguard {

/// Elasticity S = dD/dtheta * theta / D at the middle of the sweep. Points are
/// sorted by theta; an odd count uses the central difference around the middle
/// point, an even count the secant through the two middle points evaluated at
/// their mean theta and mean D.
double sensitivity_index(std::span<const double> thetas, std::span<const double> detection_rates);

/// Population standard deviation of detection rates across a sweep.
double stability_sigma(std::span<const double> detection_rates);

struct ConvergenceResult {
    bool converged = false;
    std::optional<std::size_t> index;  // last update of the first qualifying window
};

/// Converged at the first index i >= window - 1 where max |dQ| over
/// [i - window + 1, i] is below theta.
ConvergenceResult convergence_check(std::span<const double> q_deltas, double theta = 0.01,
                                    std::size_t window = 100);

}  // namespace logguard
