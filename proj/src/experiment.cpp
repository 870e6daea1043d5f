#include "coker/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "coker/measure.hpp"
#include "coker/pgroup.hpp"
#include "coker/stats.hpp"
#include "coker/version.hpp"

namespace coker {

std::string to_string(SaturationPolicy policy) {
    switch (policy) {
    case SaturationPolicy::discard_and_count: return "discard-and-count";
    case SaturationPolicy::escalate_precision: return "escalate-precision";
    case SaturationPolicy::tally_as_other: return "tally-as-other";
    }
    return "unknown";
}

SaturationPolicy parse_saturation_policy(std::string_view text) {
    if (text == "discard-and-count" || text == "discard") return SaturationPolicy::discard_and_count;
    if (text == "escalate-precision" || text == "escalate") return SaturationPolicy::escalate_precision;
    if (text == "tally-as-other" || text == "other") return SaturationPolicy::tally_as_other;
    throw std::invalid_argument("unknown saturation policy '" + std::string(text) + "'");
}

void ExperimentConfig::validate() const {
    spec.validate();
    if (tracked_max_size < 0) throw std::invalid_argument("tracked_max_size must be nonnegative");
    if (!(alpha > 0 && alpha < 1)) throw std::invalid_argument("alpha must lie in (0, 1)");
    if (!target.empty() && target.size() != spec.levels.size()) {
        throw std::invalid_argument("target needs one partition per prime");
    }
}

void Tally::merge(const Tally& other) {
    for (const auto& [k, c] : other.resolved) resolved[k] += c;
    for (const auto& [k, c] : other.saturated) saturated[k] += c;
    samples += other.samples;
    discarded += other.discarded;
    raw_saturated += other.raw_saturated;
    escalated += other.escalated;
}

namespace {

using Clock = std::chrono::steady_clock;

// Chunks are fixed by chunk_size alone, so the merged tally does not depend on
// how many workers ran them.
template <typename PerSample>
Tally run_parallel(std::uint64_t count, const RunOptions& opts, PerSample per_sample) {
    const std::uint64_t chunk = std::max<std::uint64_t>(1, opts.chunk_size);
    const std::uint64_t chunks = (count + chunk - 1) / chunk;
    std::vector<Tally> parts(chunks);
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        try {
            for (std::uint64_t c = next++; c < chunks; c = next++) {
                Tally t;
                const std::uint64_t end = std::min(count, (c + 1) * chunk);
                for (std::uint64_t i = c * chunk; i < end; ++i) per_sample(i, t);
                parts[c] = std::move(t);
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = chunks;
        }
    };

    const auto threads = static_cast<unsigned>(
        std::min<std::uint64_t>(std::max(1U, opts.workers), std::max<std::uint64_t>(1, chunks)));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    Tally total;
    for (const auto& t : parts) total.merge(t);
    return total;
}

Timing timing_since(Clock::time_point start, std::uint64_t samples, const RunOptions& opts) {
    Timing t;
    t.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    t.samples_per_second = t.wall_seconds > 0 ? static_cast<double>(samples) / t.wall_seconds : 0;
    t.workers = std::max(1U, opts.workers);
    return t;
}

ConfigEcho echo(const ExperimentConfig& cfg) {
    ConfigEcho c;
    for (const auto& level : cfg.spec.levels) c.primes.push_back({level.p.value(), level.e});
    c.n = cfg.spec.n;
    c.u = cfg.spec.u;
    c.seed = cfg.spec.seed;
    c.samples = cfg.spec.count;
    c.tracked_max_size = cfg.tracked_max_size;
    c.saturation_policy = to_string(cfg.saturation_policy);
    c.alpha = cfg.alpha;
    return c;
}

std::string joint_label(const ExperimentConfig& cfg, const JointType& joint) {
    if (joint.size() == 1) return partition_label(joint.front());
    std::string out;
    for (std::size_t i = 0; i < joint.size(); ++i) {
        if (i > 0) out += '|';
        out += "p=" + std::to_string(cfg.spec.levels[i].p.value()) + ":" + partition_label(joint[i]);
    }
    return out;
}

JointType target_of(const ExperimentConfig& cfg) {
    return cfg.target.empty() ? JointType(cfg.spec.levels.size()) : cfg.target;
}

std::uint64_t lookup(const std::map<JointType, std::uint64_t>& m, const JointType& k) {
    auto it = m.find(k);
    return it == m.end() ? 0 : it->second;
}

double binomial_se(double prob, std::uint64_t n) {
    return n == 0 ? 0.0 : std::sqrt(prob * (1 - prob) / static_cast<double>(n));
}

TargetCheck check_target(std::string label, std::uint64_t count, std::uint64_t n, double theory) {
    TargetCheck t;
    t.partition = std::move(label);
    t.count = count;
    t.theory = theory;
    if (n == 0) return t;
    t.frequency = static_cast<double>(count) / static_cast<double>(n);
    t.std_error = binomial_se(theory, n);
    t.z = t.std_error > 0 ? (t.frequency - theory) / t.std_error : 0;
    const auto w = stats::wilson_interval(count, n, 0.99);
    t.wilson_lo = w.lo;
    t.wilson_hi = w.hi;
    t.within_wilson = w.contains(theory);
    t.within_3sigma = std::abs(t.frequency - theory) <= 3 * t.std_error;
    return t;
}

void observe_sample(const ExperimentConfig& cfg, std::uint64_t index, Tally& t) {
    JointType joint;
    joint.reserve(cfg.spec.levels.size());
    bool raw = false, escalated = false, saturated = false;
    for (std::size_t level = 0; level < cfg.spec.levels.size(); ++level) {
        auto obs = observe_cokernel(sample_for_prime(cfg.spec, index, level));
        if (obs.saturated) {
            raw = true;
            if (cfg.saturation_policy == SaturationPolicy::escalate_precision) {
                if (auto refined = sample_refined(cfg.spec, index, level)) {
                    obs = observe_cokernel(*refined);
                    escalated = true;
                }
            }
        }
        saturated = saturated || obs.saturated;
        joint.push_back(std::move(obs.torsion));
    }
    ++t.samples;
    if (raw) ++t.raw_saturated;
    if (escalated) ++t.escalated;
    if (!saturated) {
        ++t.resolved[std::move(joint)];
    } else if (cfg.saturation_policy == SaturationPolicy::discard_and_count) {
        ++t.discarded;
    } else {
        ++t.saturated[std::move(joint)];
    }
}

ExperimentReport base_report(const ExperimentConfig& cfg, const Tally& tally, std::string kind) {
    ExperimentReport r;
    r.schema_version = kReportSchemaVersion;
    r.kind = std::move(kind);
    r.version = kVersion;
    r.config = echo(cfg);
    r.samples = tally.samples;
    r.discarded = tally.discarded;
    r.raw_saturated = tally.raw_saturated;
    r.escalated = tally.escalated;
    for (const auto& [k, c] : tally.saturated) r.saturated_other += c;
    r.saturation_fraction = tally.samples == 0
                                ? 0.0
                                : static_cast<double>(tally.raw_saturated) / static_cast<double>(tally.samples);
    r.precision_warning = cfg.saturation_policy == SaturationPolicy::discard_and_count &&
                          r.saturation_fraction > 0.01;
    r.other.partition = "other";
    return r;
}

void finish(ExperimentReport& r) {
    r.passed = std::all_of(r.assertions.begin(), r.assertions.end(),
                           [](const Assertion& a) { return a.passed; });
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(8);
    os << x;
    return os.str();
}

ExperimentReport distribution_report(const ExperimentConfig& cfg, const Tally& tally,
                                     std::string kind) {
    ExperimentReport r = base_report(cfg, tally, std::move(kind));
    const std::uint64_t n = tally.kept();
    const int u = cfg.spec.u;

    // Tracked joint bins: products of per-prime tracked partitions.
    const auto tracked = enumerate_partitions(cfg.tracked_max_size);
    std::vector<std::vector<double>> prob(cfg.spec.levels.size());
    for (std::size_t level = 0; level < cfg.spec.levels.size(); ++level) {
        CLMeasure<long double> m{cfg.spec.levels[level].p, u};
        const long double norm = cl_product(m).value;
        for (const auto& lambda : tracked) {
            prob[level].push_back(static_cast<double>(norm * cl_weight<long double>(m.p, u, lambda)));
        }
    }

    std::vector<std::uint64_t> observed;
    std::vector<double> theory;
    double tracked_mass = 0;
    std::uint64_t tracked_count = 0;
    std::vector<std::size_t> idx(cfg.spec.levels.size(), 0);
    for (;;) {
        JointType joint;
        double pr = 1;
        for (std::size_t level = 0; level < idx.size(); ++level) {
            joint.push_back(tracked[idx[level]]);
            pr *= prob[level][idx[level]];
        }
        const std::uint64_t count = lookup(tally.resolved, joint);
        observed.push_back(count);
        theory.push_back(pr);
        tracked_mass += pr;
        tracked_count += count;
        if (count > 0 || pr * static_cast<double>(n) >= 1) {
            BinRow row;
            row.partition = joint_label(cfg, joint);
            row.count = count;
            row.theory = pr;
            row.expected = pr * static_cast<double>(n);
            if (n > 0) {
                row.frequency = static_cast<double>(count) / static_cast<double>(n);
                const auto w = stats::wilson_interval(count, n, 0.99);
                row.wilson_lo = w.lo;
                row.wilson_hi = w.hi;
            }
            r.bins.push_back(std::move(row));
        }
        // Odometer over the per-prime indices.
        std::size_t level = idx.size();
        while (level > 0 && ++idx[level - 1] == tracked.size()) idx[--level] = 0;
        if (level == 0) break;
    }

    const std::uint64_t other_count = n - tracked_count;
    const double other_theory = std::max(0.0, 1.0 - tracked_mass);
    r.other.count = other_count;
    r.other.theory = other_theory;
    r.other.expected = other_theory * static_cast<double>(n);
    if (n > 0) {
        r.other.frequency = static_cast<double>(other_count) / static_cast<double>(n);
        const auto w = stats::wilson_interval(other_count, n, 0.99);
        r.other.wilson_lo = w.lo;
        r.other.wilson_hi = w.hi;
    }

    if (n > 0) {
        observed.push_back(other_count);
        theory.push_back(other_theory);
        const auto fit = stats::chi_square_goodness_of_fit(observed, theory);
        r.chi_square = ChiSquareEcho{fit.statistic, fit.dof, fit.p_value, fit.bins_used,
                                     fit.p_value < cfg.alpha};
        r.assertions.push_back({"chi-square-fit", !r.chi_square->rejected,
                                "statistic " + fmt(fit.statistic) + " on " +
                                    std::to_string(fit.dof) + " dof, p = " + fmt(fit.p_value) +
                                    ", alpha = " + fmt(cfg.alpha)});

        const JointType target = target_of(cfg);
        double target_theory = 1;
        for (std::size_t level = 0; level < target.size(); ++level) {
            CLMeasure<long double> m{cfg.spec.levels[level].p, u};
            target_theory *= static_cast<double>(limiting_probability(m, target[level]));
        }
        r.target = check_target(joint_label(cfg, target), lookup(tally.resolved, target), n,
                                target_theory);
    }
    return r;
}

} // namespace

Tally collect(const ExperimentConfig& cfg, const RunOptions& opts) {
    cfg.validate();
    return run_parallel(cfg.spec.count, opts,
                        [&cfg](std::uint64_t i, Tally& t) { observe_sample(cfg, i, t); });
}

ExperimentReport run_distribution_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
    const auto start = Clock::now();
    const Tally tally = collect(cfg, opts);
    ExperimentReport r = distribution_report(cfg, tally, "distribution");
    if (r.target) {
        r.assertions.push_back({"target-wilson-99", r.target->within_wilson,
                                r.target->partition + " frequency " + fmt(r.target->frequency) +
                                    " vs theory " + fmt(r.target->theory)});
    }
    finish(r);
    r.timing = timing_since(start, tally.samples, opts);
    return r;
}

ExperimentReport run_multiprime_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
    const auto start = Clock::now();
    const Tally tally = collect(cfg, opts);
    ExperimentReport r = distribution_report(cfg, tally, "multiprime");
    const std::uint64_t n = tally.kept();
    const JointType target = target_of(cfg);

    if (n > 0) {
        // Per-prime marginals over every kept sample.
        std::vector<std::uint64_t> hit(target.size(), 0);
        std::uint64_t both = 0, first = 0, second = 0, neither = 0;
        auto visit = [&](const std::map<JointType, std::uint64_t>& m) {
            for (const auto& [joint, c] : m) {
                for (std::size_t i = 0; i < joint.size(); ++i) {
                    if (joint[i] == target[i]) hit[i] += c;
                }
                if (joint.size() >= 2) {
                    const bool a = joint[0] == target[0], b = joint[1] == target[1];
                    (a && b ? both : a ? first : b ? second : neither) += c;
                }
            }
        };
        visit(tally.resolved);
        visit(tally.saturated);
        for (std::size_t i = 0; i < target.size(); ++i) {
            CLMeasure<long double> m{cfg.spec.levels[i].p, cfg.spec.u};
            r.marginals.push_back(check_target(
                "p=" + std::to_string(cfg.spec.levels[i].p.value()) + ":" + partition_label(target[i]),
                hit[i], n, static_cast<double>(limiting_probability(m, target[i]))));
        }
        if (target.size() >= 2) {
            const auto ind = stats::chi_square_independence_2x2(both, first, second, neither);
            r.independence = ChiSquareEcho{ind.statistic, ind.dof, ind.p_value, ind.bins_used,
                                           ind.p_value < cfg.alpha};
            r.assertions.push_back({"independence", !r.independence->rejected,
                                    "2x2 statistic " + fmt(ind.statistic) + ", p = " + fmt(ind.p_value)});
        }
        r.assertions.push_back({"joint-target-3sigma", r.target->within_3sigma,
                                r.target->partition + " frequency " + fmt(r.target->frequency) +
                                    " vs product " + fmt(r.target->theory) + " (z = " +
                                    fmt(r.target->z) + ")"});
    }
    finish(r);
    r.timing = timing_since(start, tally.samples, opts);
    return r;
}

namespace {

MomentRow moment_row(const std::map<Partition, std::uint64_t>& hist, std::uint64_t n,
                     const Partition& mu, bool full_cokernel, int u, int cols, Prime p) {
    MomentRow row;
    row.mu = partition_label(mu);
    row.quantity = full_cokernel ? "coker" : "torsion";
    row.target_kind = full_cokernel ? "exact" : "limit";
    row.samples = n;

    const unsigned weight = static_cast<unsigned>(u * mu.size());
    const Rational target = full_cokernel ? exact_moment_coker(cols, u, mu, p)
                                          : Rational(BigInt(1), power(p, weight));
    row.target = target.convert_to<double>();
    row.target_exact = target.str();
    row.limit = full_cokernel ? power(p, weight).convert_to<double>() : row.target;
    if (n == 0) return row;

    BigInt s1 = 0, s2 = 0;
    for (const auto& [lambda, count] : hist) {
        const BigInt x = full_cokernel ? sur_count_mixed(u, lambda, mu, p) : sur_count(lambda, mu, p);
        s1 += count * x;
        s2 += count * x * x;
    }
    const Rational mean(s1, BigInt(n));
    const Rational diff = mean - target;
    row.mean = mean.convert_to<double>();
    if (n > 1) {
        const Rational var = (Rational(s2) - Rational(s1 * s1, BigInt(n))) / Rational(BigInt(n - 1));
        row.std_error = std::sqrt(var.convert_to<double>() / static_cast<double>(n));
    }
    const double d = diff.convert_to<double>();
    if (row.std_error > 0) {
        row.z = d / row.std_error;
        row.within_3sigma = std::abs(d) <= 3 * row.std_error;
    } else {
        row.within_3sigma = diff == 0;
    }
    return row;
}

} // namespace

ExperimentReport run_moment_experiment(const ExperimentConfig& cfg,
                                       const std::vector<Partition>& mu_list,
                                       const RunOptions& opts) {
    cfg.validate();
    if (cfg.spec.levels.size() != 1) {
        throw std::invalid_argument("moment experiments take a single prime");
    }
    for (const auto& mu : mu_list) {
        if (mu.size() > 6) {
            throw std::invalid_argument("moment target (" + mu.to_string() + ") exceeds p^6");
        }
        if (mu.largest() > cfg.spec.precision()) {
            throw std::invalid_argument("moment target exponent exceeds the precision e");
        }
    }
    const auto start = Clock::now();
    const Tally tally = collect(cfg, opts);
    ExperimentReport r = base_report(cfg, tally, "moments");

    // Hom into a group of exponent <= p^e only sees coker ⊗ Z/p^e, so saturated
    // samples still give exact surjection counts.
    std::map<Partition, std::uint64_t> hist;
    for (const auto* m : {&tally.resolved, &tally.saturated}) {
        for (const auto& [joint, c] : *m) hist[joint.front()] += c;
    }
    const std::uint64_t n = tally.kept();
    for (const auto& mu : mu_list) {
        for (bool full : {true, false}) {
            r.moments.push_back(moment_row(hist, n, mu, full, cfg.spec.u, cfg.spec.n, cfg.spec.prime()));
        }
    }
    if (n > 0) {
        for (const auto& m : r.moments) {
            if (m.target_kind != "exact") continue;
            r.assertions.push_back({"exact-moment " + m.mu, m.within_3sigma,
                                    "mean " + fmt(m.mean) + " +/- " + fmt(m.std_error) +
                                        " vs exact " + m.target_exact});
        }
    }
    finish(r);
    r.timing = timing_since(start, tally.samples, opts);
    return r;
}

SaturationSweep run_saturation_sweep(Prime p, int u, int n, const std::vector<int>& e_list,
                                     std::uint64_t samples, std::uint64_t seed,
                                     const RunOptions& opts) {
    if (!std::is_sorted(e_list.begin(), e_list.end()) ||
        std::adjacent_find(e_list.begin(), e_list.end()) != e_list.end()) {
        throw std::invalid_argument("precision list must be strictly increasing");
    }
    const auto start = Clock::now();
    SaturationSweep sweep;
    sweep.p = p.value();
    sweep.u = u;
    sweep.n = n;
    sweep.seed = seed;
    for (int e : e_list) {
        const SampleSpec spec = SampleSpec::single(p, e, n, u, seed, samples);
        spec.validate();
        const Tally t = run_parallel(samples, opts, [&spec](std::uint64_t i, Tally& out) {
            ++out.samples;
            if (observe_cokernel(sample_matrix(spec, i)).saturated) ++out.raw_saturated;
        });
        SaturationRow row;
        row.e = e;
        row.samples = samples;
        row.saturated = t.raw_saturated;
        if (samples > 0) {
            row.fraction = static_cast<double>(t.raw_saturated) / static_cast<double>(samples);
            row.std_error = binomial_se(row.fraction, samples);
        }
        if (n == 1) {
            // The single column is zero mod p^e.
            const double exact = std::pow(static_cast<double>(p.value()), -static_cast<double>(e) * (u + 1));
            row.exact = exact;
            if (samples > 0) {
                row.within_3sigma = std::abs(row.fraction - exact) <= 3 * binomial_se(exact, samples);
            }
        }
        sweep.rows.push_back(row);
    }
    sweep.timing = timing_since(start, samples * e_list.size(), opts);
    return sweep;
}

double total_variation(const ExperimentReport& report) {
    double sum = 0, shown = 0;
    for (const auto& b : report.bins) {
        sum += std::abs(b.frequency - b.theory);
        shown += b.theory;
    }
    // Tracked bins left out of the table were never observed.
    const double hidden = std::max(0.0, 1.0 - report.other.theory - shown);
    sum += hidden + std::abs(report.other.frequency - report.other.theory);
    return sum / 2;
}

ConvergenceSweep run_convergence_sweep(Prime p, int u, const std::vector<int>& n_list,
                                       std::uint64_t samples, std::uint64_t seed, int e,
                                       int tracked_max_size, const RunOptions& opts) {
    if (!std::is_sorted(n_list.begin(), n_list.end())) {
        throw std::invalid_argument("n list must be increasing");
    }
    const auto start = Clock::now();
    ConvergenceSweep sweep;
    sweep.p = p.value();
    sweep.u = u;
    sweep.e = e;
    sweep.seed = seed;
    sweep.tracked_max_size = tracked_max_size;
    for (int n : n_list) {
        ExperimentConfig cfg;
        cfg.spec = SampleSpec::single(p, e, n, u, seed, samples);
        cfg.tracked_max_size = tracked_max_size;
        ConvergenceRow row;
        row.n = n;
        row.samples = samples;
        if (samples > 0) row.tv_distance = total_variation(run_distribution_experiment(cfg, opts));
        sweep.rows.push_back(row);
    }
    sweep.timing = timing_since(start, samples * n_list.size(), opts);
    return sweep;
}

} // namespace coker
