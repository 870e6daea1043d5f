#pragma once

#include <cstdint>
#include <vector>

namespace coker::stats {

struct Interval {
    double lo;
    double hi;
    bool contains(double x) const { return lo <= x && x <= hi; }
};

/// Two-sided standard normal quantile for the given confidence (0.99 → 2.5758...).
double normal_critical_value(double confidence);

/// Wilson score interval for a binomial proportion.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double confidence);

/// P(X >= statistic) for X ~ χ²(dof).
double chi_square_survival(double statistic, int dof);

struct GoodnessOfFit {
    double statistic = 0;
    int dof = 0;
    double p_value = 1;
    /// Bins after merging those with expected count below the threshold.
    int bins_used = 0;
};

/// Pearson χ² of observed counts against probabilities (which must cover the
/// outcome space). Bins whose expected count is below min_expected are pooled;
/// the pool is folded into the smallest retained bin if it is still too small.
GoodnessOfFit chi_square_goodness_of_fit(const std::vector<std::uint64_t>& observed,
                                         const std::vector<double>& probabilities,
                                         double min_expected = 5.0);

/// Pearson χ² test of independence for a 2×2 contingency table.
GoodnessOfFit chi_square_independence_2x2(std::uint64_t both, std::uint64_t first_only,
                                          std::uint64_t second_only, std::uint64_t neither);

} // namespace coker::stats
