// Acceptance gate: one PASS/FAIL line per criterion. Exit status is nonzero if
// any selected criterion fails.

#include <chrono>
#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coker/experiment.hpp"
#include "coker/measure.hpp"
#include "coker/report.hpp"
#include "coker/stats.hpp"
#include "coker/verify.hpp"

using namespace coker;

namespace {

// Pinned tolerances.
constexpr double kSigmas = 3.0;
constexpr double kAlpha = 0.001;
constexpr double kWilsonConfidence = 0.99;
constexpr double kTotalMassTolerance = 1e-3;
constexpr double kSaturationCeiling = 1e-3;
constexpr std::uint64_t kSeed = 1;

struct Outcome {
    bool passed = true;
    std::ostringstream detail;

    void note(bool ok, const std::string& what) {
        passed = passed && ok;
        if (detail.tellp() > 0) detail << "; ";
        detail << (ok ? "" : "FAILED ") << what;
    }
};

std::string fmt(double x, int digits = 6) {
    std::ostringstream s;
    s << std::setprecision(digits) << x;
    return s.str();
}

ExperimentConfig single(std::uint64_t p, int n, int u, int e, std::uint64_t samples) {
    ExperimentConfig cfg;
    cfg.spec = SampleSpec::single(Prime(p), e, n, u, kSeed, samples);
    cfg.alpha = kAlpha;
    return cfg;
}

void oracle_equivalence(Outcome& out) {
    const struct { std::uint64_t p, max_order; } cases[] = {{2, 256}, {3, 256}, {5, 125}};
    for (auto c : cases) {
        const auto s = verify_against_oracle(Prime(c.p), c.max_order);
        out.note(s.passed() && s.checks > 0,
                 "p=" + std::to_string(c.p) + " order<=" + std::to_string(c.max_order) + ": " +
                     std::to_string(s.checks) + " checks, " + std::to_string(s.failure_count) + " mismatches");
        for (const auto& f : s.failures) out.note(false, f);
    }
}

void duality(Outcome& out) {
    for (std::uint64_t p : {2, 3, 5}) {
        const auto s = verify_duality(Prime(p), 12);
        out.note(s.passed(), "p=" + std::to_string(p) + ": " + std::to_string(s.checks) + " types");
        for (const auto& f : s.failures) out.note(false, f);
    }
}

void snf_cross_check(Outcome& out) {
    const auto s = verify_snf_against_integers({Prime(2), Prime(3), Prime(5)}, 12, 10000, kSeed);
    out.note(s.passed(), std::to_string(s.checks) + " reductions, " + std::to_string(s.failure_count) +
                             " mismatches");
    for (const auto& f : s.failures) out.note(false, f);
}

void exact_moments(Outcome& out) {
    const struct { std::uint64_t p; int u, n; Partition mu; } cases[] = {
        {2, 0, 1, {1}}, {2, 1, 2, {1}}, {3, 0, 2, {1}}, {2, 0, 3, {1, 1}}};
    for (const auto& c : cases) {
        const auto r = run_moment_experiment(single(c.p, c.n, c.u, 10, 1000000), {c.mu});
        for (const auto& row : r.moments) {
            if (row.quantity != "coker") continue;
            const bool ok = std::abs(row.mean - row.target) <= kSigmas * row.std_error;
            out.note(ok, "(p=" + std::to_string(c.p) + ",u=" + std::to_string(c.u) + ",n=" +
                             std::to_string(c.n) + ",mu=" + c.mu.to_string() + ") mean " +
                             fmt(row.mean) + " vs " + row.target_exact + " (z=" + fmt(row.z, 3) + ")");
        }
    }
}

void torsion_moment_limit(Outcome& out) {
    for (int u : {1, 2}) {
        const auto r = run_moment_experiment(single(2, 12, u, 10, 100000), {Partition{1}});
        for (const auto& row : r.moments) {
            if (row.quantity != "torsion") continue;
            const double target = std::pow(2.0, -u);
            const bool ok = std::abs(row.mean - target) <= kSigmas * row.std_error;
            out.note(ok, "u=" + std::to_string(u) + " mean " + fmt(row.mean) + " vs " + fmt(target) +
                             " (z=" + fmt((row.mean - target) / row.std_error, 3) + ")");
        }
    }
}

void distribution_match(Outcome& out) {
    for (std::uint64_t p : {2, 3}) {
        for (int u : {0, 1, 2}) {
            auto cfg = single(p, 12, u, 10, 100000);
            cfg.tracked_max_size = 6;
            const auto r = run_distribution_experiment(cfg);
            const double product = static_cast<double>(cl_product<long double>(Prime(p), u).value);
            const auto w = stats::wilson_interval(r.target->count, r.samples - r.discarded, kWilsonConfidence);
            const bool chi_ok = r.chi_square && r.chi_square->p_value >= kAlpha;
            const bool trivial_ok = w.contains(product);
            out.note(chi_ok && trivial_ok,
                     "(p=" + std::to_string(p) + ",u=" + std::to_string(u) + ") chi2 p=" +
                         fmt(r.chi_square ? r.chi_square->p_value : 0.0, 3) + ", trivial " +
                         fmt(r.target->frequency) + " in [" + fmt(w.lo) + "," + fmt(w.hi) + "] vs " +
                         fmt(product));
        }
    }
}

void total_mass(Outcome& out) {
    for (std::uint64_t p : {2, 3}) {
        for (int u : {0, 1}) {
            const CLMeasure<long double> m{Prime(p), u};
            const long double sum = total_mass_partial_sum(m, 20);
            const long double target = 1 / cl_product(m).value;
            const double gap = static_cast<double>(std::abs(target - sum));
            out.note(gap <= kTotalMassTolerance, "(p=" + std::to_string(p) + ",u=" + std::to_string(u) +
                                                     ") gap " + fmt(gap, 3));
        }
    }
}

void saturation_decay(Outcome& out) {
    const auto one = run_saturation_sweep(Prime(2), 0, 1, {2, 4, 6, 8}, 100000, kSeed);
    for (const auto& row : one.rows) {
        const double target = std::pow(2.0, -row.e);
        const bool ok = std::abs(row.fraction - target) <= kSigmas * std::sqrt(target * (1 - target) / row.samples);
        out.note(ok, "n=1 e=" + std::to_string(row.e) + " " + fmt(row.fraction) + " vs " + fmt(target));
    }
    const auto four = run_saturation_sweep(Prime(2), 0, 4, {6}, 100000, kSeed);
    const double f = four.rows.front().fraction;
    out.note(f < kSaturationCeiling, "n=4 e=6 " + fmt(f) + " < " + fmt(kSaturationCeiling));
}

void multiprime(Outcome& out) {
    ExperimentConfig cfg;
    cfg.spec.levels = {{Prime(2), 10}, {Prime(3), 10}};
    cfg.spec.n = 10;
    cfg.spec.u = 0;
    cfg.spec.seed = kSeed;
    cfg.spec.count = 100000;
    cfg.alpha = kAlpha;
    const auto r = run_multiprime_experiment(cfg);
    const double product = static_cast<double>(cl_product<long double>(Prime(2), 0).value *
                                               cl_product<long double>(Prime(3), 0).value);
    const double n = static_cast<double>(r.samples - r.discarded);
    const double se = std::sqrt(product * (1 - product) / n);
    const double freq = r.target->frequency;
    out.note(std::abs(freq - product) <= kSigmas * se,
             "joint trivial " + fmt(freq) + " vs " + fmt(product) + " (z=" + fmt((freq - product) / se, 3) + ")");
}

void reproducibility(Outcome& out) {
    auto dist = single(3, 8, 1, 8, 20000);
    dist.tracked_max_size = 5;
    ExperimentConfig multi;
    multi.spec.levels = {{Prime(2), 6}, {Prime(5), 4}};
    multi.spec.n = 5;
    multi.spec.seed = kSeed;
    multi.spec.count = 20000;

    const std::vector<std::pair<std::string, std::function<ExperimentReport(unsigned)>>> runs = {
        {"distribution", [&](unsigned w) { return run_distribution_experiment(dist, {w}); }},
        {"moments", [&](unsigned w) { return run_moment_experiment(dist, {Partition{1}, Partition{1, 1}}, {w}); }},
        {"multiprime", [&](unsigned w) { return run_multiprime_experiment(multi, {w}); }},
    };
    for (const auto& [name, run] : runs) {
        const std::string reference = without_timing(nlohmann::json(run(1))).dump();
        bool same = true;
        for (unsigned w : {4u, 16u}) same = same && without_timing(nlohmann::json(run(w))).dump() == reference;
        out.note(same, name + " identical for workers 1,4,16");
    }
}

struct Criterion {
    int id;
    std::string name;
    std::function<void(Outcome&)> check;
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::vector<int> only;
    app.add_option("--only", only, "Run only these criteria")->check(CLI::Range(1, 10));
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> criteria = {
        {1, "oracle equivalence", oracle_equivalence},
        {2, "order/index duality", duality},
        {3, "SNF cross-check", snf_cross_check},
        {4, "exact finite-n moments", exact_moments},
        {5, "torsion moment limit", torsion_moment_limit},
        {6, "distribution match", distribution_match},
        {7, "total mass", total_mass},
        {8, "saturation decay", saturation_decay},
        {9, "multi-prime", multiprime},
        {10, "reproducibility", reproducibility},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        Outcome out;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.check(out);
        } catch (const std::exception& e) {
            out.note(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!out.passed) ++failures;
        std::cout << (out.passed ? "[PASS] " : "[FAIL] ") << "criterion " << c.id << " (" << c.name
                  << ", " << fmt(secs, 3) << "s): " << out.detail.str() << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
