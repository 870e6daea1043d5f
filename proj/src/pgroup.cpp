#include "coker/pgroup.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace coker {

BigInt power(std::uint64_t p, unsigned k) {
    return boost::multiprecision::pow(BigInt(p), k);
}

BigInt gaussian_binomial(int n, int k, Prime p) {
    if (k < 0 || n < 0 || k > n) return 0;
    BigInt num = 1;
    BigInt den = 1;
    for (int i = 0; i < k; ++i) {
        num *= power(p, static_cast<unsigned>(n - i)) - 1;
        den *= power(p, static_cast<unsigned>(i + 1)) - 1;
    }
    return num / den;
}

BigInt group_order(const Partition& lambda, Prime p) {
    return power(p, static_cast<unsigned>(lambda.size()));
}

BigInt aut_order(const Partition& lambda, Prime p) {
    const Partition conj = lambda.conjugate();
    long exponent = 0;
    for (int c : conj.parts()) exponent += static_cast<long>(c) * c;

    // ∏_{j=1}^{m} (1 - p^{-j}) = p^{-m(m+1)/2} ∏_{j=1}^{m} (p^j - 1)
    BigInt result = 1;
    const auto mult = lambda.multiplicities();
    for (std::size_t i = 1; i < mult.size(); ++i) {
        const int m = mult[i];
        for (int j = 1; j <= m; ++j) result *= power(p, static_cast<unsigned>(j)) - 1;
        exponent -= static_cast<long>(m) * (m + 1) / 2;
    }
    return result * power(p, static_cast<unsigned>(exponent));
}

BigInt hom_count(const Partition& lambda, const Partition& mu, Prime p) {
    unsigned exponent = 0;
    for (int a : lambda.parts()) {
        for (int b : mu.parts()) exponent += static_cast<unsigned>(std::min(a, b));
    }
    return power(p, exponent);
}

BigInt count_subgroups_of_type(const Partition& lambda, const Partition& nu, Prime p) {
    if (!is_subtype(nu, lambda)) return 0;
    const Partition lc = lambda.conjugate();
    const Partition nc = nu.conjugate();
    auto at = [](const Partition& c, int i) {
        return i < c.length() ? c[static_cast<std::size_t>(i)] : 0;
    };
    // ∏_i p^{ν'_{i+1}(λ'_i - ν'_i)} [λ'_i - ν'_{i+1} choose ν'_i - ν'_{i+1}]_p
    BigInt result = 1;
    unsigned exponent = 0;
    for (int i = 0; i < lc.length(); ++i) {
        const int l = at(lc, i);
        const int n = at(nc, i);
        const int next = at(nc, i + 1);
        exponent += static_cast<unsigned>(next * (l - n));
        result *= gaussian_binomial(l - next, n - next, p);
    }
    return result * power(p, exponent);
}

namespace {

// Subtypes of μ in graded order with the number of subgroups of each type
// inside each other; depends only on (μ, p), so it is shared across calls.
struct SubtypeLattice {
    std::vector<Partition> types;
    // below[i] lists (j, #subgroups of type j in G_{types[i]}) for proper subtypes j.
    std::vector<std::vector<std::pair<std::size_t, BigInt>>> below;
};

std::shared_ptr<const SubtypeLattice> subtype_lattice(const Partition& mu, Prime p) {
    static std::mutex mutex;
    static std::map<std::pair<Partition, std::uint64_t>, std::shared_ptr<const SubtypeLattice>> cache;
    const auto key = std::make_pair(mu, p.value());
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    auto lattice = std::make_shared<SubtypeLattice>();
    lattice->types = subtypes_of(mu);
    const auto& types = lattice->types;
    lattice->below.resize(types.size());
    for (std::size_t i = 0; i < types.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (types[j].size() < types[i].size() && is_subtype(types[j], types[i])) {
                lattice->below[i].emplace_back(j, count_subgroups_of_type(types[i], types[j], p));
            }
        }
    }
    std::lock_guard lock(mutex);
    return cache.emplace(key, std::move(lattice)).first->second;
}

} // namespace

BigInt sur_count_mixed(int free_rank, const Partition& lambda, const Partition& mu, Prime p) {
    if (free_rank < 0) throw std::invalid_argument("free rank must be nonnegative");
    if (free_rank == 0 && !is_subtype(mu, lambda)) return 0;

    // Graded order resolves every proper subtype of ν before ν itself.
    const auto lattice = subtype_lattice(mu, p);
    std::vector<BigInt> sur(lattice->types.size());
    for (std::size_t i = 0; i < lattice->types.size(); ++i) {
        const Partition& nu = lattice->types[i];
        BigInt value = power(p, static_cast<unsigned>(free_rank * nu.size())) *
                       hom_count(lambda, nu, p);
        for (const auto& [j, count] : lattice->below[i]) {
            if (sur[j] != 0) value -= count * sur[j];
        }
        sur[i] = std::move(value);
    }
    return sur.back();
}

BigInt sur_count(const Partition& lambda, const Partition& mu, Prime p) {
    return sur_count_mixed(0, lambda, mu, p);
}

BigInt sur_count_from_free(int m, const Partition& mu, Prime p) {
    if (m < 0) throw std::invalid_argument("free rank must be nonnegative");
    const int k = mu.length();
    if (k > m) return 0;
    // p^{m|μ|} ∏_{i<k} (1 - p^{i-m}) = p^{m|μ| - km} ∏_{i<k} (p^m - p^i)
    BigInt result = power(p, static_cast<unsigned>(m * mu.size() - k * m));
    const BigInt pm = power(p, static_cast<unsigned>(m));
    for (int i = 0; i < k; ++i) result *= pm - power(p, static_cast<unsigned>(i));
    return result;
}

BigInt count_subgroups_of_order(const Partition& lambda, int d, Prime p) {
    BigInt total = 0;
    if (d < 0 || d > lambda.size()) return total;
    for (const auto& nu : subtypes_of(lambda)) {
        if (nu.size() == d) total += count_subgroups_of_type(lambda, nu, p);
    }
    return total;
}

DualityReport verify_order_index_duality(const Partition& lambda, Prime p) {
    std::map<int, BigInt> by_order;
    for (const auto& nu : subtypes_of(lambda)) {
        by_order[nu.size()] += count_subgroups_of_type(lambda, nu, p);
    }
    DualityReport report;
    for (int d = 0; d <= lambda.size(); ++d) {
        const BigInt& of_order = by_order[d];
        const BigInt& of_index = by_order[lambda.size() - d];
        if (of_order != of_index) {
            report.holds = false;
            report.failing_exponent = d;
            report.order_count = of_order;
            report.index_count = of_index;
            return report;
        }
    }
    return report;
}

} // namespace coker
