#include "coker/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

namespace coker::stats {

double normal_critical_value(double confidence) {
    boost::math::normal_distribution<double> normal;
    return boost::math::quantile(normal, 0.5 + confidence / 2);
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double confidence) {
    if (trials == 0) return {0.0, 1.0};
    const double z = normal_critical_value(confidence);
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double centre = (phat + z2 / (2 * n)) / (1 + z2 / n);
    const double half = z * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n)) / (1 + z2 / n);
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

double chi_square_survival(double statistic, int dof) {
    if (dof < 1) return 1.0;
    boost::math::chi_squared_distribution<double> dist(dof);
    return boost::math::cdf(boost::math::complement(dist, std::max(0.0, statistic)));
}

GoodnessOfFit chi_square_goodness_of_fit(const std::vector<std::uint64_t>& observed,
                                         const std::vector<double>& probabilities,
                                         double min_expected) {
    if (observed.size() != probabilities.size()) {
        throw std::invalid_argument("observed and probability vectors differ in length");
    }
    const double total = static_cast<double>(std::accumulate(observed.begin(), observed.end(), std::uint64_t{0}));
    GoodnessOfFit out;
    if (total == 0) return out;

    std::vector<double> obs, exp;
    double pooled_obs = 0, pooled_exp = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double e = probabilities[i] * total;
        if (e >= min_expected) {
            obs.push_back(static_cast<double>(observed[i]));
            exp.push_back(e);
        } else {
            pooled_obs += static_cast<double>(observed[i]);
            pooled_exp += e;
        }
    }
    if (pooled_exp >= min_expected || (obs.empty() && pooled_exp > 0)) {
        obs.push_back(pooled_obs);
        exp.push_back(pooled_exp);
    } else if (pooled_exp > 0 || pooled_obs > 0) {
        auto smallest = std::min_element(exp.begin(), exp.end()) - exp.begin();
        obs[static_cast<std::size_t>(smallest)] += pooled_obs;
        exp[static_cast<std::size_t>(smallest)] += pooled_exp;
    }
    for (std::size_t i = 0; i < obs.size(); ++i) {
        const double d = obs[i] - exp[i];
        out.statistic += d * d / exp[i];
    }
    out.bins_used = static_cast<int>(obs.size());
    out.dof = out.bins_used - 1;
    out.p_value = chi_square_survival(out.statistic, out.dof);
    return out;
}

GoodnessOfFit chi_square_independence_2x2(std::uint64_t both, std::uint64_t first_only,
                                          std::uint64_t second_only, std::uint64_t neither) {
    const double a = static_cast<double>(both), b = static_cast<double>(first_only);
    const double c = static_cast<double>(second_only), d = static_cast<double>(neither);
    const double n = a + b + c + d;
    GoodnessOfFit out;
    out.bins_used = 4;
    out.dof = 1;
    const double row1 = a + b, row2 = c + d, col1 = a + c, col2 = b + d;
    if (n == 0 || row1 == 0 || row2 == 0 || col1 == 0 || col2 == 0) return out;
    const double cells[4] = {a, b, c, d};
    const double expected[4] = {row1 * col1 / n, row1 * col2 / n, row2 * col1 / n, row2 * col2 / n};
    for (int i = 0; i < 4; ++i) {
        const double diff = cells[i] - expected[i];
        out.statistic += diff * diff / expected[i];
    }
    out.p_value = chi_square_survival(out.statistic, 1);
    return out;
}

} // namespace coker::stats
