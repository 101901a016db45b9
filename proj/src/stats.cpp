#include "logguard/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

namespace logguard {

std::string_view to_string(EffectSize e) {
    switch (e) {
        case EffectSize::Negligible: return "negligible";
        case EffectSize::Small: return "small";
        case EffectSize::Medium: return "medium";
        case EffectSize::Large: return "large";
    }
    return "?";
}

namespace {

// Midranks of the pooled sample; a occupies the first n1 slots.
std::vector<double> pooled_ranks(std::span<const double> a, std::span<const double> b,
                                 double* tie_term) {
    const std::size_t n = a.size() + b.size();
    std::vector<double> values(a.begin(), a.end());
    values.insert(values.end(), b.begin(), b.end());
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
    std::vector<double> ranks(n);
    double ties = 0.0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double mid = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mid;
        const double t = static_cast<double>(j - i + 1);
        ties += t * t * t - t;
        i = j + 1;
    }
    if (tie_term) *tie_term = ties;
    return ranks;
}

double u_statistic(std::span<const double> ranks, std::size_t n1) {
    double r1 = 0.0;
    for (std::size_t i = 0; i < n1; ++i) r1 += ranks[i];
    const double n = static_cast<double>(n1);
    return r1 - n * (n + 1.0) / 2.0;
}

void require_samples(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("statistical test needs two nonempty samples");
    for (auto s : {a, b}) {
        for (double v : s) {
            if (!std::isfinite(v)) throw std::invalid_argument("statistical test input is not finite");
        }
    }
}

double normal_upper_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

}  // namespace

EffectSize effect_label(double r) {
    const double m = std::abs(r);
    if (m < 0.1) return EffectSize::Negligible;
    if (m < 0.3) return EffectSize::Small;
    if (m < 0.5) return EffectSize::Medium;
    return EffectSize::Large;
}

RankBiserial rank_biserial(double u, std::size_t n1, std::size_t n2) {
    if (n1 == 0 || n2 == 0) throw std::invalid_argument("rank-biserial needs nonempty samples");
    RankBiserial rb;
    rb.r = 1.0 - 2.0 * u / (static_cast<double>(n1) * static_cast<double>(n2));
    rb.label = effect_label(rb.r);
    return rb;
}

TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b) {
    require_samples(a, b);
    double ties = 0.0;
    auto ranks = pooled_ranks(a, b, &ties);
    const double n1 = static_cast<double>(a.size());
    const double n2 = static_cast<double>(b.size());
    const double n = n1 + n2;

    TestResult res;
    res.statistic = u_statistic(ranks, a.size());
    const double mean = n1 * n2 / 2.0;
    const double var = n1 * n2 / 12.0 * ((n + 1.0) - ties / (n * (n - 1.0)));
    if (!(var > 0.0)) {
        res.z = 0.0;
        res.p_value = 1.0;
    } else {
        const double diff = std::max(std::abs(res.statistic - mean) - 0.5, 0.0);
        const double z = diff / std::sqrt(var);
        res.z = res.statistic >= mean ? z : -z;
        // Edgeworth term with the excess kurtosis of the untied U distribution.
        const double k4 = -6.0 * (n1 * n1 + n2 * n2 + n1 * n2 + n1 + n2) / (5.0 * n1 * n2 * (n + 1.0));
        const double phi = std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
        const double tail = normal_upper_tail(z) + phi * k4 / 24.0 * (z * z * z - 3.0 * z);
        res.p_value = std::clamp(2.0 * tail, 0.0, 1.0);
    }
    auto rb = rank_biserial(res.statistic, a.size(), b.size());
    res.effect_size = rb.r;
    res.label = rb.label;
    return res;
}

double exact_mann_whitney_p(std::span<const double> a, std::span<const double> b) {
    require_samples(a, b);
    const std::size_t n1 = a.size(), n = a.size() + b.size();
    if (n > 24) throw std::invalid_argument("exact permutation test limited to 24 observations");
    auto ranks = pooled_ranks(a, b, nullptr);
    const double center = static_cast<double>(n1) * static_cast<double>(b.size()) / 2.0;
    const double observed = std::abs(u_statistic(ranks, n1) - center);
    const double base = static_cast<double>(n1) * static_cast<double>(n1 + 1) / 2.0;
    std::size_t extreme = 0, total = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) != n1) continue;
        double r1 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1u << i)) r1 += ranks[i];
        }
        ++total;
        if (std::abs(r1 - base - center) >= observed - 1e-9) ++extreme;
    }
    return static_cast<double>(extreme) / static_cast<double>(total);
}

TestResult welch_t_test(std::span<const double> a, std::span<const double> b) {
    require_samples(a, b);
    if (a.size() < 2 || b.size() < 2) throw std::invalid_argument("Welch test needs two observations per sample");
    auto moments = [](std::span<const double> s) {
        const double n = static_cast<double>(s.size());
        const double m = std::accumulate(s.begin(), s.end(), 0.0) / n;
        double ss = 0.0;
        for (double v : s) ss += (v - m) * (v - m);
        return std::pair{m, ss / (n - 1.0)};
    };
    auto [ma, va] = moments(a);
    auto [mb, vb] = moments(b);
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    const double se2 = va / na + vb / nb;
    TestResult res;
    const double pooled = std::sqrt(((na - 1.0) * va + (nb - 1.0) * vb) / (na + nb - 2.0));
    res.effect_size = pooled > 0.0 ? (ma - mb) / pooled : 0.0;
    res.label = std::abs(res.effect_size) < 0.2   ? EffectSize::Negligible
                : std::abs(res.effect_size) < 0.5 ? EffectSize::Small
                : std::abs(res.effect_size) < 0.8 ? EffectSize::Medium
                                                  : EffectSize::Large;
    if (!(se2 > 0.0)) {
        res.p_value = ma == mb ? 1.0 : 0.0;
        return res;
    }
    res.statistic = (ma - mb) / std::sqrt(se2);
    const double df = se2 * se2 / ((va / na) * (va / na) / (na - 1.0) + (vb / nb) * (vb / nb) / (nb - 1.0));
    res.z = df;
    boost::math::students_t dist(df);
    res.p_value = std::clamp(2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(res.statistic))), 0.0, 1.0);
    return res;
}

}  // namespace logguard
