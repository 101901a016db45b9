#include "logguard/savgol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace logguard {

// Orthogonal polynomials on the window abscissae (Stieltjes recurrence) give
// the projection onto degree <= poly without forming normal equations.
std::vector<double> savgol_weights(std::size_t left, std::size_t right, std::size_t poly) {
    const std::size_t m = left + right + 1;
    const std::size_t degree = std::min(poly, m - 1);
    const double half = std::max<double>(static_cast<double>(std::max(left, right)), 1.0);
    std::vector<double> x(m);
    for (std::size_t j = 0; j < m; ++j) x[j] = (static_cast<double>(j) - static_cast<double>(left)) / half;

    std::vector<double> weights(m, 0.0);
    std::vector<double> p_prev(m, 0.0), p(m, 1.0), p_next(m);
    double p_prev_at0 = 0.0, p_at0 = 1.0;
    double norm_prev = 1.0;
    for (std::size_t k = 0; k <= degree; ++k) {
        double norm = 0.0, moment = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            norm += p[j] * p[j];
            moment += x[j] * p[j] * p[j];
        }
        for (std::size_t j = 0; j < m; ++j) weights[j] += p_at0 * p[j] / norm;
        if (k == degree) break;
        const double alpha = moment / norm;
        const double beta = k == 0 ? 0.0 : norm / norm_prev;
        for (std::size_t j = 0; j < m; ++j) p_next[j] = (x[j] - alpha) * p[j] - beta * p_prev[j];
        const double next_at0 = (0.0 - alpha) * p_at0 - beta * p_prev_at0;
        p_prev.swap(p);
        p.swap(p_next);
        p_prev_at0 = p_at0;
        p_at0 = next_at0;
        norm_prev = norm;
    }
    return weights;
}

std::vector<double> savitzky_golay(std::span<const double> series, std::size_t window, std::size_t poly) {
    if (window % 2 == 0) throw std::invalid_argument("Savitzky-Golay window must be odd");
    if (poly >= window) throw std::invalid_argument("Savitzky-Golay degree must be below the window length");
    if (series.empty()) throw std::invalid_argument("Savitzky-Golay needs a nonempty series");
    const std::size_t n = series.size();
    const std::size_t half = window / 2;
    std::vector<double> out(n);
    std::vector<double> interior;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t left = std::min(half, i);
        const std::size_t right = std::min(half, n - 1 - i);
        std::vector<double> edge;
        const std::vector<double>* w;
        if (left == half && right == half) {
            if (interior.empty()) interior = savgol_weights(half, half, poly);
            w = &interior;
        } else {
            edge = savgol_weights(left, right, poly);
            w = &edge;
        }
        double acc = 0.0;
        for (std::size_t j = 0; j < w->size(); ++j) acc += (*w)[j] * series[i - left + j];
        out[i] = acc;
    }
    return out;
}

}  // namespace logguard
