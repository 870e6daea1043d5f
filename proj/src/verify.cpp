#include "coker/verify.hpp"

#include <map>

#include <Eigen/Core>
#include <boost/multiprecision/eigen.hpp>

#include "coker/integer_snf.hpp"
#include "coker/pgroup.hpp"
#include "coker/sampler.hpp"
#include "coker/zpe.hpp"

namespace coker {

void CheckSummary::fail(std::string what) {
    ++failure_count;
    if (failures.size() < 10) failures.push_back(std::move(what));
}

namespace {

std::vector<Partition> groups_up_to(Prime p, std::uint64_t max_order) {
    std::vector<Partition> out;
    int max_size = 0;
    for (std::uint64_t order = p.value(); order <= max_order; order *= p.value()) ++max_size;
    return enumerate_partitions(max_size);
}

std::string pair_label(const char* what, const Partition& a, const Partition& b, Prime p) {
    return std::string(what) + "((" + a.to_string() + "), (" + b.to_string() + ")) at p=" +
           std::to_string(p.value());
}

} // namespace

CheckSummary verify_against_oracle(Prime p, std::uint64_t max_order, const oracle::Budget& budget) {
    CheckSummary s;
    s.name = "oracle p=" + std::to_string(p.value()) + " order<=" + std::to_string(max_order);
    const auto groups = groups_up_to(p, max_order);

    std::vector<oracle::ExplicitGroup> explicit_groups;
    for (const auto& g : groups) explicit_groups.emplace_back(g, p, budget.max_group_order);

    for (std::size_t j = 0; j < groups.size(); ++j) {
        const auto& target = explicit_groups[j];
        const auto& mu = groups[j];

        ++s.checks;
        if (aut_order(mu, p) != oracle::enumerate_automorphisms(target, budget)) {
            s.fail("aut_order(" + mu.to_string() + ") at p=" + std::to_string(p.value()));
        }

        std::map<Partition, BigInt> subgroups;
        for (auto& [type, count] : oracle::enumerate_subgroups(target, budget)) subgroups[type] = count;
        for (const auto& nu : groups) {
            ++s.checks;
            const auto it = subgroups.find(nu);
            const BigInt expected = it == subgroups.end() ? BigInt(0) : it->second;
            if (count_subgroups_of_type(mu, nu, p) != expected) {
                s.fail(pair_label("count_subgroups_of_type", mu, nu, p));
            }
        }

        oracle::SurjectionCounter surjections(target, budget);
        for (std::size_t i = 0; i < groups.size(); ++i) {
            const auto& lambda = groups[i];
            s.checks += 2;
            if (hom_count(lambda, mu, p) != oracle::enumerate_homs(explicit_groups[i], target).count) {
                s.fail(pair_label("hom_count", lambda, mu, p));
            }
            if (sur_count(lambda, mu, p) != surjections.count_from(lambda)) {
                s.fail(pair_label("sur_count", lambda, mu, p));
            }
        }
    }
    return s;
}

CheckSummary verify_duality(Prime p, int max_size) {
    CheckSummary s;
    s.name = "duality p=" + std::to_string(p.value()) + " |lambda|<=" + std::to_string(max_size);
    for (const auto& lambda : enumerate_partitions(max_size)) {
        ++s.checks;
        const auto report = verify_order_index_duality(lambda, p);
        if (!report.holds) {
            s.fail("(" + lambda.to_string() + ") at d=" + std::to_string(*report.failing_exponent) +
                   ": " + report.order_count.str() + " vs " + report.index_count.str());
        }
    }
    return s;
}

CheckSummary verify_snf_against_integers(const std::vector<Prime>& primes, int e,
                                         std::uint64_t samples, std::uint64_t seed, int max_dim,
                                         int entry_bound) {
    using IntMatrix = Eigen::Matrix<BigInt, Eigen::Dynamic, Eigen::Dynamic>;
    CheckSummary s;
    s.name = "integer SNF cross-check e=" + std::to_string(e);
    const auto span = static_cast<std::uint64_t>(2 * entry_bound + 1);
    for (std::uint64_t k = 0; k < samples; ++k) {
        SplitMix64 gen = sample_stream(seed, k, 0);
        const auto rows = static_cast<Eigen::Index>(1 + uniform_below(gen, static_cast<std::uint64_t>(max_dim)));
        const auto cols = static_cast<Eigen::Index>(1 + uniform_below(gen, static_cast<std::uint64_t>(rows)));
        Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> m(rows, cols);
        IntMatrix big(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i) {
            for (Eigen::Index j = 0; j < cols; ++j) {
                m(i, j) = static_cast<long long>(uniform_below(gen, span)) - entry_bound;
                big(i, j) = m(i, j);
            }
        }
        const auto factors = integer_snf_oracle<BigInt>(big);
        for (Prime p : primes) {
            ++s.checks;
            std::vector<int> expected;
            for (const auto& d : factors) {
                int v = 0;
                if (d == 0) {
                    v = e;
                } else {
                    for (BigInt x = d; v < e && x % p.value() == 0; x /= p.value()) ++v;
                }
                expected.push_back(v);
            }
            const auto got = smith_normal_form(MatrixModPE::from_integers(p, e, m)).valuations;
            if (got != expected) {
                s.fail("sample " + std::to_string(k) + " at p=" + std::to_string(p.value()));
            }
        }
    }
    return s;
}

} // namespace coker
