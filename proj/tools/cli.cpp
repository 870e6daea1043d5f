#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "coker/experiment.hpp"
#include "coker/measure.hpp"
#include "coker/report.hpp"
#include "coker/verify.hpp"
#include "coker/version.hpp"

namespace coker::cli {

namespace {

constexpr int kAssertionFailure = 1;
constexpr int kUsageError = 2;

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

std::string invocation_of(int argc, const char* const* argv) {
    std::string out = "coker";
    for (int i = 1; i < argc; ++i) {
        out += ' ';
        out += argv[i];
    }
    return out;
}

unsigned default_workers() {
    if (const char* env = std::getenv("COKER_WORKERS")) {
        try {
            return static_cast<unsigned>(std::max(1, std::stoi(env)));
        } catch (const std::exception&) {
        }
    }
    return 1;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("malformed integer list '" + text + "'");
        }
    }
    if (out.empty()) throw UsageError("empty integer list");
    return out;
}

// Output sink: a file when a path is given, otherwise the caller's stream.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw UsageError("cannot open output file '" + path + "'");
            stream_ = &file_;
        }
    }
    std::ostream& get() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream* stream_;
};

struct Common {
    std::string format = "table";
    std::string output;
    std::uint64_t seed = 0;
    unsigned workers = default_workers();
    bool assert_results = false;
};

void add_common(CLI::App* cmd, Common& c, const std::string& default_format) {
    c.format = default_format;
    cmd->add_option("--format", c.format, "Output format")
        ->check(CLI::IsMember({"json", "csv", "table", "pretty-table"}))
        ->capture_default_str();
    cmd->add_option("-o,--output", c.output, "Write output to this file instead of stdout");
}

void add_sampling(CLI::App* cmd, Common& c) {
    cmd->add_option("--seed", c.seed, "Random seed")->capture_default_str();
    cmd->add_option("--workers", c.workers,
                    "Worker threads (affects wall-clock only; default from COKER_WORKERS)")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--assert", c.assert_results, "Exit with status 1 if a statistical check fails");
}

void emit_json(std::ostream& out, const nlohmann::json& j) {
    out << j.dump(2) << '\n';
}

// --- measure -------------------------------------------------------------

struct MeasureArgs {
    std::uint64_t p = 0;
    int u = 0;
    int max_size = 6;
    double tolerance = 1e-12;
    Common common;
};

int cmd_measure(const MeasureArgs& a, const std::string& invocation, std::ostream& out) {
    CLMeasure<long double> m{Prime(a.p), a.u, static_cast<long double>(a.tolerance), a.max_size};
    m.validate();
    const auto product = cl_product(m);

    struct Row {
        Partition lambda;
        long double prob;
        long double cumulative;
    };
    std::vector<Row> rows;
    long double cumulative = 0;
    for (const auto& lambda : enumerate_partitions(a.max_size)) {
        const long double prob = limiting_probability(m, lambda);
        cumulative += prob;
        rows.push_back({lambda, prob, cumulative});
    }
    const long double tail = 1 - cumulative;

    Sink sink(a.common.output, out);
    std::ostream& os = sink.get();
    if (a.common.format == "json") {
        nlohmann::json j;
        j["version"] = kVersion;
        j["invocation"] = invocation;
        j["p"] = a.p;
        j["u"] = a.u;
        j["max_size"] = a.max_size;
        j["product"] = static_cast<double>(product.value);
        j["product_factors"] = product.factors;
        j["product_tail_bound"] = static_cast<double>(product.tail_bound);
        for (const auto& r : rows) {
            j["rows"].push_back({{"partition", partition_label(r.lambda)},
                                 {"group", group_label(r.lambda, a.p)},
                                 {"size", r.lambda.size()},
                                 {"probability", static_cast<double>(r.prob)},
                                 {"cumulative", static_cast<double>(r.cumulative)}});
        }
        j["cumulative"] = static_cast<double>(cumulative);
        j["tail_mass"] = static_cast<double>(tail);
        emit_json(os, j);
    } else if (a.common.format == "csv") {
        os << std::setprecision(15);
        os << "partition,group,size,probability,cumulative\n";
        for (const auto& r : rows) {
            os << '"' << partition_label(r.lambda) << "\"," << group_label(r.lambda, a.p) << ','
               << r.lambda.size() << ',' << r.prob << ',' << r.cumulative << '\n';
        }
        os << "tail,,," << tail << ",1\n";
    } else {
        os << std::setprecision(12);
        os << "limiting cokernel distribution, p=" << a.p << " u=" << a.u
           << " (normalizer " << product.value << ")\n";
        os << std::left << std::setw(20) << "partition" << std::setw(28) << "group" << std::right
           << std::setw(20) << "probability" << std::setw(20) << "cumulative" << '\n';
        for (const auto& r : rows) {
            os << std::left << std::setw(20) << partition_label(r.lambda) << std::setw(28)
               << group_label(r.lambda, a.p) << std::right << std::setw(20) << r.prob
               << std::setw(20) << r.cumulative << '\n';
        }
        os << "tail mass " << tail << '\n';
    }
    return 0;
}

// --- simulate / moments ----------------------------------------------------

struct SimulateArgs {
    std::uint64_t p = 2;
    std::string primes;
    int u = 0;
    int n = 10;
    int e = 10;
    std::uint64_t samples = 100000;
    int tracked_max_size = 8;
    std::string policy = "escalate-precision";
    double alpha = 0.001;
    std::vector<std::string> target;
    std::vector<std::string> mu = {"1"};
    Common common;
};

ExperimentConfig make_config(const SimulateArgs& a) {
    ExperimentConfig cfg;
    std::vector<int> primes = a.primes.empty() ? std::vector<int>{static_cast<int>(a.p)}
                                               : parse_int_list(a.primes);
    for (int p : primes) {
        if (p < 2) throw UsageError(std::to_string(p) + " is not prime");
        cfg.spec.levels.push_back({Prime(static_cast<std::uint64_t>(p)), a.e});
    }
    cfg.spec.n = a.n;
    cfg.spec.u = a.u;
    cfg.spec.seed = a.common.seed;
    cfg.spec.count = a.samples;
    cfg.tracked_max_size = a.tracked_max_size;
    cfg.saturation_policy = parse_saturation_policy(a.policy);
    cfg.alpha = a.alpha;
    for (const auto& t : a.target) cfg.target.push_back(parse_partition(t));
    cfg.validate();
    return cfg;
}

void write_report(std::ostream& os, const ExperimentReport& r, const std::string& format) {
    if (format == "json") {
        emit_json(os, r);
    } else if (format == "csv") {
        if (r.kind == "moments") write_moments_csv(os, r); else write_bins_csv(os, r);
    } else {
        write_table(os, r);
    }
}

int cmd_simulate(const SimulateArgs& a, const std::string& invocation, std::ostream& out) {
    const ExperimentConfig cfg = make_config(a);
    const RunOptions opts{a.common.workers};
    ExperimentReport r = cfg.spec.levels.size() > 1 ? run_multiprime_experiment(cfg, opts)
                                                    : run_distribution_experiment(cfg, opts);
    r.invocation = invocation;
    Sink sink(a.common.output, out);
    write_report(sink.get(), r, a.common.format);
    return a.common.assert_results && !r.passed ? kAssertionFailure : 0;
}

int cmd_moments(const SimulateArgs& a, const std::string& invocation, std::ostream& out) {
    if (!a.primes.empty()) throw UsageError("moments take a single prime (-p)");
    const ExperimentConfig cfg = make_config(a);
    std::vector<Partition> mus;
    for (const auto& m : a.mu) mus.push_back(parse_partition(m));
    ExperimentReport r = run_moment_experiment(cfg, mus, RunOptions{a.common.workers});
    r.invocation = invocation;
    Sink sink(a.common.output, out);
    write_report(sink.get(), r, a.common.format);
    return a.common.assert_results && !r.passed ? kAssertionFailure : 0;
}

// --- verify --------------------------------------------------------------

struct VerifyArgs {
    std::uint64_t max_group_order = 64;
    std::vector<std::uint64_t> primes = {2, 3, 5};
    int duality_max_size = 8;
    std::uint64_t snf_samples = 1000;
    int snf_precision = 12;
    Common common;
};

int cmd_verify(const VerifyArgs& a, const std::string& invocation, std::ostream& out) {
    std::vector<Prime> primes;
    for (auto p : a.primes) primes.emplace_back(p);
    std::vector<CheckSummary> results;
    for (Prime p : primes) results.push_back(verify_against_oracle(p, a.max_group_order));
    for (Prime p : primes) results.push_back(verify_duality(p, a.duality_max_size));
    results.push_back(verify_snf_against_integers(primes, a.snf_precision, a.snf_samples, a.common.seed));

    bool all = true;
    Sink sink(a.common.output, out);
    std::ostream& os = sink.get();
    nlohmann::json j;
    for (const auto& s : results) {
        all = all && s.passed();
        if (a.common.format == "json") {
            j["checks"].push_back({{"name", s.name}, {"checks", s.checks},
                                   {"failures", s.failure_count}, {"examples", s.failures},
                                   {"passed", s.passed()}});
        } else {
            os << (s.passed() ? "[PASS] " : "[FAIL] ") << s.name << " (" << s.checks << " checks";
            if (!s.passed()) os << ", " << s.failure_count << " failed";
            os << ")\n";
            for (const auto& f : s.failures) os << "       " << f << '\n';
        }
    }
    if (a.common.format == "json") {
        j["version"] = kVersion;
        j["invocation"] = invocation;
        j["passed"] = all;
        emit_json(os, j);
    }
    return all ? 0 : kAssertionFailure;
}

// --- sweep ---------------------------------------------------------------

struct SweepArgs {
    std::string kind;
    std::uint64_t p = 2;
    int u = 0;
    int n = 1;
    std::string e_list;
    std::string n_list = "2,4,8,12";
    std::uint64_t samples = 100000;
    int tracked_max_size = 6;
    Common common;
};

int cmd_sweep(const SweepArgs& a, const std::string& invocation, std::ostream& out) {
    const Prime p(a.p);
    const RunOptions opts{a.common.workers};
    Sink sink(a.common.output, out);
    std::ostream& os = sink.get();
    bool passed = true;
    if (a.kind == "saturation") {
        const auto e_list = parse_int_list(a.e_list.empty() ? "2,4,6,8" : a.e_list);
        SaturationSweep sweep = run_saturation_sweep(p, a.u, a.n, e_list, a.samples, a.common.seed, opts);
        sweep.invocation = invocation;
        for (const auto& row : sweep.rows) {
            if (row.within_3sigma && !*row.within_3sigma) passed = false;
        }
        if (a.common.format == "json") emit_json(os, sweep);
        else if (a.common.format == "csv") write_csv(os, sweep);
        else write_table(os, sweep);
    } else {
        const auto e = parse_int_list(a.e_list.empty() ? "10" : a.e_list);
        if (e.size() != 1) throw UsageError("convergence sweeps take a single precision -e");
        ConvergenceSweep sweep = run_convergence_sweep(p, a.u, parse_int_list(a.n_list), a.samples,
                                                       a.common.seed, e.front(), a.tracked_max_size, opts);
        sweep.invocation = invocation;
        if (sweep.rows.size() >= 2 && sweep.rows.front().tv_distance && sweep.rows.back().tv_distance) {
            passed = *sweep.rows.back().tv_distance < *sweep.rows.front().tv_distance;
        }
        if (a.common.format == "json") emit_json(os, sweep);
        else if (a.common.format == "csv") write_csv(os, sweep);
        else write_table(os, sweep);
    }
    return a.common.assert_results && !passed ? kAssertionFailure : 0;
}

void add_simulation_options(CLI::App* cmd, SimulateArgs& a, bool moments) {
    cmd->add_option("-p", a.p, "Prime")->capture_default_str();
    if (!moments) {
        cmd->add_option("--primes", a.primes, "Comma-separated distinct primes (multi-prime mode)");
        cmd->add_option("--target", a.target,
                        "Target torsion type per prime for the joint check (e.g. trivial, 2,1)");
        cmd->add_option("--tracked-max-size", a.tracked_max_size, "Largest |lambda| with its own bin")
            ->capture_default_str();
    } else {
        cmd->add_option("--mu", a.mu, "Target group type, e.g. 1 or 1,1 (repeatable)")
            ->capture_default_str();
    }
    cmd->add_option("-u", a.u, "Extra rows")->capture_default_str();
    cmd->add_option("-n", a.n, "Columns")->capture_default_str();
    cmd->add_option("-e", a.e, "Precision exponent (entries mod p^e)")->capture_default_str();
    cmd->add_option("-N,--samples", a.samples, "Number of samples")->capture_default_str();
    cmd->add_option("--policy", a.policy,
                    "Saturation policy: discard-and-count, escalate-precision, tally-as-other")
        ->capture_default_str();
    cmd->add_option("--alpha", a.alpha, "Significance level")->capture_default_str();
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Random p-adic matrix cokernels: limit measure, exact moments "
                 "and Monte Carlo checks"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    const std::string invocation = invocation_of(argc, argv);

    MeasureArgs measure;
    auto* measure_cmd = app.add_subcommand("measure", "Tabulate the limiting cokernel distribution");
    measure_cmd->add_option("-p", measure.p, "Prime")->required();
    measure_cmd->add_option("-u", measure.u, "Extra rows")->capture_default_str();
    measure_cmd->add_option("--max-size", measure.max_size, "Largest |lambda| listed")->capture_default_str();
    measure_cmd->add_option("--tolerance", measure.tolerance, "Relative tolerance of the infinite product")
        ->capture_default_str();
    add_common(measure_cmd, measure.common, "table");

    SimulateArgs simulate;
    auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo cokernel distribution test");
    add_simulation_options(simulate_cmd, simulate, false);
    add_common(simulate_cmd, simulate.common, "json");
    add_sampling(simulate_cmd, simulate.common);

    SimulateArgs moments;
    moments.n = 1;
    auto* moments_cmd = app.add_subcommand("moments", "Monte Carlo #Sur moment test");
    add_simulation_options(moments_cmd, moments, true);
    add_common(moments_cmd, moments.common, "table");
    add_sampling(moments_cmd, moments.common);

    VerifyArgs verify;
    auto* verify_cmd = app.add_subcommand("verify", "Check formulas against brute-force enumeration");
    verify_cmd->add_option("--max-group-order", verify.max_group_order, "Largest group order enumerated")
        ->capture_default_str();
    verify_cmd->add_option("-p", verify.primes, "Primes to check (repeatable)")->capture_default_str();
    verify_cmd->add_option("--duality-max-size", verify.duality_max_size, "Largest |lambda| for duality")
        ->capture_default_str();
    verify_cmd->add_option("--snf-samples", verify.snf_samples, "Random integer matrices for the SNF check")
        ->capture_default_str();
    verify_cmd->add_option("--snf-precision", verify.snf_precision, "Precision e for the SNF check")
        ->capture_default_str();
    verify_cmd->add_option("--seed", verify.common.seed, "Seed for the SNF matrices")->capture_default_str();
    add_common(verify_cmd, verify.common, "table");

    SweepArgs sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "Saturation or convergence sweeps");
    sweep_cmd->add_option("kind", sweep.kind, "saturation or convergence")
        ->required()
        ->check(CLI::IsMember({"saturation", "convergence"}));
    sweep_cmd->add_option("-p", sweep.p, "Prime")->capture_default_str();
    sweep_cmd->add_option("-u", sweep.u, "Extra rows")->capture_default_str();
    sweep_cmd->add_option("-n", sweep.n, "Columns (saturation sweep)")->capture_default_str();
    sweep_cmd->add_option("-e,--e", sweep.e_list,
                          "Precisions, comma-separated (saturation: default 2,4,6,8; convergence: one value, default 10)");
    sweep_cmd->add_option("--n-list", sweep.n_list, "Column counts for the convergence sweep")
        ->capture_default_str();
    sweep_cmd->add_option("-N,--samples", sweep.samples, "Samples per row")->capture_default_str();
    sweep_cmd->add_option("--tracked-max-size", sweep.tracked_max_size, "Largest |lambda| with its own bin")
        ->capture_default_str();
    add_common(sweep_cmd, sweep.common, "table");
    add_sampling(sweep_cmd, sweep.common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsageError;
    }

    try {
        if (*measure_cmd) return cmd_measure(measure, invocation, out);
        if (*simulate_cmd) return cmd_simulate(simulate, invocation, out);
        if (*moments_cmd) return cmd_moments(moments, invocation, out);
        if (*verify_cmd) return cmd_verify(verify, invocation, out);
        if (*sweep_cmd) return cmd_sweep(sweep, invocation, out);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }
    return kUsageError;
}

} // namespace coker::cli
