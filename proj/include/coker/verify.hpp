#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coker/oracle.hpp"
#include "coker/prime.hpp"

namespace coker {

struct CheckSummary {
    std::string name;
    std::uint64_t checks = 0;
    /// Human-readable descriptions of the first few disagreements.
    std::vector<std::string> failures;
    std::uint64_t failure_count = 0;

    bool passed() const { return failure_count == 0; }
    void fail(std::string what);
};

/// aut_order, hom_count, sur_count and count_subgroups_of_type against the
/// brute-force oracle for every pair of groups of order <= max_order.
CheckSummary verify_against_oracle(Prime p, std::uint64_t max_order,
                                   const oracle::Budget& budget = {});

/// Order/index subgroup duality for every λ with |λ| <= max_size.
CheckSummary verify_duality(Prime p, int max_size);

/// Random integer matrices (rows <= max_dim, cols <= rows, entries in
/// [-entry_bound, entry_bound]) reduced mod p^e: Smith valuations against the
/// p-adic valuations of the integer invariant factors, clamped at e.
CheckSummary verify_snf_against_integers(const std::vector<Prime>& primes, int e,
                                         std::uint64_t samples, std::uint64_t seed,
                                         int max_dim = 5, int entry_bound = 50);

} // namespace coker
