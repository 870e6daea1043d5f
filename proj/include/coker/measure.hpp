#pragma once

#include <cmath>
#include <stdexcept>

#include "coker/partition.hpp"
#include "coker/pgroup.hpp"
#include "coker/prime.hpp"

namespace coker {

/// Parameters of the u-weighted Cohen–Lenstra measure
///   P(G) = ∏_{i>=1}(1 - p^{-i-u}) / (|G|^u |Aut G|).
template <typename Real = long double>
struct CLMeasure {
    Prime p;
    int u = 0;
    /// Relative error allowed in the truncated infinite product.
    Real product_tolerance = Real(1e-12);
    /// Largest |λ| enumerated in partial sums.
    int max_size = 20;

    void validate() const {
        if (u < 0) throw std::invalid_argument("u must be nonnegative");
        if (!(product_tolerance > 0 && product_tolerance <= Real(1e-6))) {
            throw std::invalid_argument("product tolerance must lie in (0, 1e-6]");
        }
        if (max_size < 0) throw std::invalid_argument("max_size must be nonnegative");
    }
};

template <typename Real>
struct TruncatedProduct {
    Real value;
    /// Factors actually multiplied.
    int factors;
    /// Bound on the relative error from the dropped tail.
    Real tail_bound;
};

template <typename Real>
Real to_real(const BigInt& x) {
    return x.template convert_to<Real>();
}

/// ∏_{i>=1} (1 - p^{-i-u}), stopping at the first factor within tolerance/10 of 1.
template <typename Real = long double>
TruncatedProduct<Real> cl_product(Prime p, int u, Real tolerance = Real(1e-12)) {
    const Real inv_p = Real(1) / Real(p.value());
    Real x = std::pow(inv_p, Real(u + 1));
    Real value = 1;
    int factors = 0;
    while (x >= tolerance / 10) {
        value *= 1 - x;
        ++factors;
        x *= inv_p;
    }
    // Σ_{j>=i} -log(1 - x_j) <= x_i / ((1 - x_i)(1 - 1/p))
    const Real tail = x / ((1 - x) * (1 - inv_p));
    return {value, factors, tail};
}

template <typename Real>
TruncatedProduct<Real> cl_product(const CLMeasure<Real>& m) {
    m.validate();
    return cl_product<Real>(m.p, m.u, m.product_tolerance);
}

/// 1 / (|G_λ|^u |Aut G_λ|), the unnormalized weight.
template <typename Real = long double>
Real cl_weight(Prime p, int u, const Partition& lambda) {
    return Real(1) / to_real<Real>(power(p, static_cast<unsigned>(u * lambda.size())) *
                                   aut_order(lambda, p));
}

/// lim_{n→∞} P(coker M ≅ Z_p^u ⊕ G_λ).
template <typename Real>
Real limiting_probability(const CLMeasure<Real>& m, const Partition& lambda) {
    return cl_product(m).value * cl_weight<Real>(m.p, m.u, lambda);
}

/// Σ_{|λ| <= max_size} 1 / (|G_λ|^u |Aut G_λ|).
template <typename Real>
Real total_mass_partial_sum(const CLMeasure<Real>& m, int max_size) {
    m.validate();
    if (max_size < 0) throw std::invalid_argument("size cutoff must be nonnegative");
    Real sum = 0;
    for (const auto& lambda : enumerate_partitions(max_size)) {
        sum += cl_weight<Real>(m.p, m.u, lambda);
    }
    return sum;
}

/// E[#Sur(coker M, G_μ)] for a Haar (n+u) × n matrix, exactly:
/// #Sur(Z_p^{n+u}, G_μ) / |G_μ|^n.
inline Rational exact_moment_coker(int n, int u, const Partition& mu, Prime p) {
    if (n < 1) throw std::invalid_argument("n must be at least 1");
    if (u < 0) throw std::invalid_argument("u must be nonnegative");
    return Rational(sur_count_from_free(n + u, mu, p),
                    power(p, static_cast<unsigned>(n * mu.size())));
}

/// lim_{n→∞} E[#Sur(coker M, G_μ)] = |G_μ|^u.
inline BigInt limiting_moment_coker(int u, const Partition& mu, Prime p) {
    return power(p, static_cast<unsigned>(u * mu.size()));
}

/// lim_{n→∞} E[#Sur(T, G_μ)] = |G_μ|^{-u} for the torsion part T.
template <typename Real = long double>
Real limiting_moment_torsion(int u, const Partition& mu, Prime p) {
    return std::pow(Real(p.value()), -Real(u) * Real(mu.size()));
}

template <typename Real>
struct MeasureMoment {
    Real value;
    /// Probability mass of the limit measure outside |λ| <= max_size.
    Real tail_mass;
};

/// Σ_{|λ| <= max_size} P(λ) #Sur(G_λ, G_μ) under the limit measure.
template <typename Real>
MeasureMoment<Real> limit_measure_moment(const CLMeasure<Real>& m, const Partition& mu) {
    const Real norm = cl_product(m).value;
    Real value = 0;
    Real mass = 0;
    for (const auto& lambda : enumerate_partitions(m.max_size)) {
        const Real prob = norm * cl_weight<Real>(m.p, m.u, lambda);
        mass += prob;
        value += prob * to_real<Real>(sur_count(lambda, mu, m.p));
    }
    return {value, 1 - mass};
}

} // namespace coker
