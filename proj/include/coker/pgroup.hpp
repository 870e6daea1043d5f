#pragma once

#include <optional>

#include <boost/multiprecision/cpp_int.hpp>

#include "coker/partition.hpp"
#include "coker/prime.hpp"

namespace coker {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// p^k as an exact integer.
BigInt power(std::uint64_t p, unsigned k);

/// Gaussian binomial [n choose k]_p, the number of k-dimensional subspaces of F_p^n.
BigInt gaussian_binomial(int n, int k, Prime p);

/// |G_λ| = p^{|λ|}.
BigInt group_order(const Partition& lambda, Prime p);

/// |Aut G_λ| = p^{Σ_j (λ'_j)^2} ∏_i ∏_{j=1}^{m_i} (1 - p^{-j}), with m_i the
/// multiplicity of part i. Computed as an exact integer.
BigInt aut_order(const Partition& lambda, Prime p);

/// #Hom(G_λ, G_μ) = p^{Σ_{i,j} min(λ_i, μ_j)}.
BigInt hom_count(const Partition& lambda, const Partition& mu, Prime p);

/// Number of subgroups of G_λ isomorphic to G_ν (zero unless ν ⊆ λ).
BigInt count_subgroups_of_type(const Partition& lambda, const Partition& nu, Prime p);

/// #Sur(Z_p^free_rank ⊕ G_λ, G_μ), by inverting
///   #Hom(A, G_μ) = Σ_{H ≤ G_μ} #Sur(A, H)
/// over subgroup types of G_μ, with #Hom(Z_p^f ⊕ G_λ, G_ν) = |G_ν|^f #Hom(G_λ, G_ν).
BigInt sur_count_mixed(int free_rank, const Partition& lambda, const Partition& mu, Prime p);

/// #Sur(G_λ, G_μ).
BigInt sur_count(const Partition& lambda, const Partition& mu, Prime p);

/// #Sur(Z_p^m, G_μ) = p^{m|μ|} ∏_{i=0}^{k-1} (1 - p^{-m+i}) with k = μ'_1.
BigInt sur_count_from_free(int m, const Partition& mu, Prime p);

struct DualityReport {
    bool holds = true;
    /// First exponent d where the count of order-p^d subgroups differs from
    /// the count of index-p^d subgroups.
    std::optional<int> failing_exponent;
    BigInt order_count;
    BigInt index_count;
};

/// Checks that G_λ has as many subgroups of order p^d as of index p^d, for
/// every 0 <= d <= |λ|.
DualityReport verify_order_index_duality(const Partition& lambda, Prime p);

/// Total number of subgroups of G_λ of order p^d.
BigInt count_subgroups_of_order(const Partition& lambda, int d, Prime p);

} // namespace coker
