#include "logguard/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace logguard {

double sensitivity_index(std::span<const double> thetas, std::span<const double> detection_rates) {
    if (thetas.size() != detection_rates.size()) throw std::invalid_argument("sensitivity: length mismatch");
    const std::size_t n = thetas.size();
    if (n < 2) throw std::invalid_argument("sensitivity needs at least two points");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(thetas[i] > 0.0)) throw std::invalid_argument("sensitivity: parameter values must be positive");
        if (!(detection_rates[i] > 0.0)) throw std::invalid_argument("sensitivity: detection rates must be positive");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return thetas[a] < thetas[b]; });
    for (std::size_t i = 1; i < n; ++i) {
        if (thetas[order[i]] == thetas[order[i - 1]]) throw std::invalid_argument("sensitivity: duplicate parameter value");
    }
    auto t = [&](std::size_t i) { return thetas[order[i]]; };
    auto d = [&](std::size_t i) { return detection_rates[order[i]]; };
    const std::size_t mid = n / 2;
    if (n % 2 == 1) {
        const double slope = (d(mid + 1) - d(mid - 1)) / (t(mid + 1) - t(mid - 1));
        return slope * t(mid) / d(mid);
    }
    const double slope = (d(mid) - d(mid - 1)) / (t(mid) - t(mid - 1));
    const double theta_bar = 0.5 * (t(mid) + t(mid - 1));
    const double d_bar = 0.5 * (d(mid) + d(mid - 1));
    return slope * theta_bar / d_bar;
}

double stability_sigma(std::span<const double> detection_rates) {
    if (detection_rates.empty()) throw std::invalid_argument("stability sigma of an empty sweep");
    const double n = static_cast<double>(detection_rates.size());
    const double mean = std::accumulate(detection_rates.begin(), detection_rates.end(), 0.0) / n;
    double ss = 0.0;
    for (double d : detection_rates) ss += (d - mean) * (d - mean);
    return std::sqrt(ss / n);
}

ConvergenceResult convergence_check(std::span<const double> q_deltas, double theta, std::size_t window) {
    if (window == 0) throw std::invalid_argument("convergence window must be positive");
    // Monotone deque of indices holding a decreasing run of |dQ|.
    std::deque<std::size_t> maxq;
    for (std::size_t i = 0; i < q_deltas.size(); ++i) {
        const double v = std::abs(q_deltas[i]);
        while (!maxq.empty() && std::abs(q_deltas[maxq.back()]) <= v) maxq.pop_back();
        maxq.push_back(i);
        if (maxq.front() + window <= i) maxq.pop_front();
        if (i + 1 >= window && std::abs(q_deltas[maxq.front()]) < theta) return {true, i};
    }
    return {};
}

}  // namespace logguard
