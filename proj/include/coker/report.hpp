#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "coker/partition.hpp"

namespace nlohmann {

template <typename T>
struct adl_serializer<std::optional<T>> {
    static void to_json(json& j, const std::optional<T>& v) {
        if (v) j = *v; else j = nullptr;
    }
    static void from_json(const json& j, std::optional<T>& v) {
        if (j.is_null()) v.reset(); else v = j.get<T>();
    }
};

} // namespace nlohmann

namespace coker {

/// CSV/table label of a partition: "2,1", or "trivial" for the empty one.
std::string partition_label(const Partition& lambda);
/// Group label: "Z/4+Z/2", or "1" for the trivial group.
std::string group_label(const Partition& lambda, std::uint64_t p);

struct PrimeEcho {
    std::uint64_t p = 0;
    int e = 0;
    friend bool operator==(const PrimeEcho&, const PrimeEcho&) = default;
};

struct ConfigEcho {
    std::vector<PrimeEcho> primes;
    int n = 0;
    int u = 0;
    std::uint64_t seed = 0;
    std::uint64_t samples = 0;
    int tracked_max_size = 0;
    std::string saturation_policy;
    double alpha = 0;
    friend bool operator==(const ConfigEcho&, const ConfigEcho&) = default;
};

struct BinRow {
    std::string partition;
    std::uint64_t count = 0;
    double frequency = 0;
    double theory = 0;
    double expected = 0;
    double wilson_lo = 0;
    double wilson_hi = 0;
    friend bool operator==(const BinRow&, const BinRow&) = default;
};

struct ChiSquareEcho {
    double statistic = 0;
    int dof = 0;
    double p_value = 1;
    int bins_used = 0;
    bool rejected = false;
    friend bool operator==(const ChiSquareEcho&, const ChiSquareEcho&) = default;
};

/// Frequency of one (joint) outcome against its predicted probability.
struct TargetCheck {
    std::string partition;
    std::uint64_t count = 0;
    double frequency = 0;
    double theory = 0;
    double std_error = 0;
    double z = 0;
    double wilson_lo = 0;
    double wilson_hi = 1;
    bool within_wilson = false;
    bool within_3sigma = false;
    friend bool operator==(const TargetCheck&, const TargetCheck&) = default;
};

struct MomentRow {
    std::string mu;
    /// "coker" for #Sur(coker M, G) or "torsion" for #Sur(T, G).
    std::string quantity;
    /// "exact" (finite-n formula) or "limit" (n → ∞ value).
    std::string target_kind;
    std::uint64_t samples = 0;
    double mean = 0;
    double std_error = 0;
    double target = 0;
    std::string target_exact;
    double limit = 0;
    double z = 0;
    bool within_3sigma = false;
    friend bool operator==(const MomentRow&, const MomentRow&) = default;
};

struct Assertion {
    std::string name;
    bool passed = false;
    std::string detail;
    friend bool operator==(const Assertion&, const Assertion&) = default;
};

struct Timing {
    double wall_seconds = 0;
    double samples_per_second = 0;
    unsigned workers = 1;
    friend bool operator==(const Timing&, const Timing&) = default;
};

struct ExperimentReport {
    int schema_version = 1;
    /// "distribution", "moments" or "multiprime".
    std::string kind;
    std::string version;
    std::string invocation;
    ConfigEcho config;

    std::uint64_t samples = 0;
    std::uint64_t discarded = 0;
    std::uint64_t raw_saturated = 0;
    std::uint64_t escalated = 0;
    std::uint64_t saturated_other = 0;
    double saturation_fraction = 0;
    bool precision_warning = false;

    std::vector<BinRow> bins;
    BinRow other;
    std::optional<ChiSquareEcho> chi_square;
    std::optional<TargetCheck> target;
    std::optional<ChiSquareEcho> independence;
    std::vector<TargetCheck> marginals;
    std::vector<MomentRow> moments;

    std::vector<Assertion> assertions;
    bool passed = true;
    Timing timing;

    friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

struct SaturationRow {
    int e = 0;
    std::uint64_t samples = 0;
    std::uint64_t saturated = 0;
    double fraction = 0;
    double std_error = 0;
    /// p^{-e(u+1)} when n = 1 (the single column vanishes mod p^e).
    std::optional<double> exact;
    std::optional<bool> within_3sigma;
    friend bool operator==(const SaturationRow&, const SaturationRow&) = default;
};

struct SaturationSweep {
    std::uint64_t p = 0;
    int u = 0;
    int n = 0;
    std::uint64_t seed = 0;
    std::vector<SaturationRow> rows;
    std::string invocation;
    Timing timing;
    friend bool operator==(const SaturationSweep&, const SaturationSweep&) = default;
};

struct ConvergenceRow {
    int n = 0;
    std::uint64_t samples = 0;
    std::optional<double> tv_distance;
    friend bool operator==(const ConvergenceRow&, const ConvergenceRow&) = default;
};

struct ConvergenceSweep {
    std::uint64_t p = 0;
    int u = 0;
    int e = 0;
    std::uint64_t seed = 0;
    int tracked_max_size = 0;
    std::vector<ConvergenceRow> rows;
    std::string invocation;
    Timing timing;
    friend bool operator==(const ConvergenceSweep&, const ConvergenceSweep&) = default;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(PrimeEcho, p, e)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ConfigEcho, primes, n, u, seed, samples, tracked_max_size,
                                   saturation_policy, alpha)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(BinRow, partition, count, frequency, theory, expected,
                                   wilson_lo, wilson_hi)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ChiSquareEcho, statistic, dof, p_value, bins_used, rejected)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(TargetCheck, partition, count, frequency, theory, std_error, z,
                                   wilson_lo, wilson_hi, within_wilson, within_3sigma)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(MomentRow, mu, quantity, target_kind, samples, mean, std_error,
                                   target, target_exact, limit, z, within_3sigma)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Assertion, name, passed, detail)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Timing, wall_seconds, samples_per_second, workers)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ExperimentReport, schema_version, kind, version, invocation,
                                   config, samples, discarded, raw_saturated, escalated,
                                   saturated_other, saturation_fraction, precision_warning, bins,
                                   other, chi_square, target, independence, marginals, moments,
                                   assertions, passed, timing)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SaturationRow, e, samples, saturated, fraction, std_error,
                                   exact, within_3sigma)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SaturationSweep, p, u, n, seed, rows, invocation, timing)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ConvergenceRow, n, samples, tv_distance)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ConvergenceSweep, p, u, e, seed, tracked_max_size, rows,
                                   invocation, timing)

/// The JSON form with the "timing" block removed, for reproducibility comparisons.
nlohmann::json without_timing(nlohmann::json j);

void write_bins_csv(std::ostream& out, const ExperimentReport& report);
void write_moments_csv(std::ostream& out, const ExperimentReport& report);
void write_csv(std::ostream& out, const SaturationSweep& sweep);
void write_csv(std::ostream& out, const ConvergenceSweep& sweep);

void write_table(std::ostream& out, const ExperimentReport& report);
void write_table(std::ostream& out, const SaturationSweep& sweep);
void write_table(std::ostream& out, const ConvergenceSweep& sweep);

} // namespace coker
