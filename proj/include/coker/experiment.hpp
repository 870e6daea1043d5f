#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "coker/partition.hpp"
#include "coker/report.hpp"
#include "coker/sampler.hpp"

namespace coker {

enum class SaturationPolicy {
    /// Drop saturated samples and count them.
    discard_and_count,
    /// Redraw the sample's missing digits at precision 2e once; tally as
    /// "other" if still saturated.
    escalate_precision,
    /// Keep saturated samples in the "other" bucket.
    tally_as_other,
};

std::string to_string(SaturationPolicy policy);
SaturationPolicy parse_saturation_policy(std::string_view text);

struct ExperimentConfig {
    SampleSpec spec;
    /// Partitions with |λ| up to this size get their own bin.
    int tracked_max_size = 8;
    SaturationPolicy saturation_policy = SaturationPolicy::escalate_precision;
    double alpha = 0.001;
    /// Per-prime target outcome for the joint-frequency check; empty means all trivial.
    std::vector<Partition> target;

    void validate() const;
};

/// Execution knobs that never change results.
struct RunOptions {
    unsigned workers = 1;
    std::uint64_t chunk_size = 1024;
};

/// One torsion type per prime of the spec.
using JointType = std::vector<Partition>;

/// Outcome counts of a batch of samples. Merging is commutative.
struct Tally {
    std::map<JointType, std::uint64_t> resolved;
    /// Samples still saturated after the policy ran but kept.
    std::map<JointType, std::uint64_t> saturated;
    std::uint64_t samples = 0;
    std::uint64_t discarded = 0;
    std::uint64_t raw_saturated = 0;
    std::uint64_t escalated = 0;

    void merge(const Tally& other);
    std::uint64_t kept() const { return samples - discarded; }
};

/// Samples the spec and observes every cokernel, applying the saturation policy.
Tally collect(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// Empirical cokernel distribution against the limit measure.
ExperimentReport run_distribution_experiment(const ExperimentConfig& cfg,
                                             const RunOptions& opts = {});

/// Empirical #Sur moments: the full cokernel against the exact finite-n value and
/// the torsion part against the n → ∞ value |G|^{-u}.
ExperimentReport run_moment_experiment(const ExperimentConfig& cfg,
                                       const std::vector<Partition>& mu_list,
                                       const RunOptions& opts = {});

/// Joint distribution over several primes against the product of single-prime limits.
ExperimentReport run_multiprime_experiment(const ExperimentConfig& cfg,
                                           const RunOptions& opts = {});

/// Raw saturation frequency (no escalation) at each precision.
SaturationSweep run_saturation_sweep(Prime p, int u, int n, const std::vector<int>& e_list,
                                     std::uint64_t samples, std::uint64_t seed,
                                     const RunOptions& opts = {});

/// Total-variation distance to the limit measure over tracked bins, per n.
ConvergenceSweep run_convergence_sweep(Prime p, int u, const std::vector<int>& n_list,
                                       std::uint64_t samples, std::uint64_t seed, int e = 10,
                                       int tracked_max_size = 6, const RunOptions& opts = {});

/// ½ Σ |f - π| over tracked bins plus the "other" bucket.
double total_variation(const ExperimentReport& report);

} // namespace coker
