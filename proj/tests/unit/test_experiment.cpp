#include <doctest.h>

#include <cmath>

#include "coker/experiment.hpp"
#include "coker/report.hpp"

using namespace coker;

namespace {

ExperimentConfig config(std::uint64_t p, int n, int u, int e, std::uint64_t count, std::uint64_t seed = 1) {
    ExperimentConfig cfg;
    cfg.spec = SampleSpec::single(Prime(p), e, n, u, seed, count);
    cfg.tracked_max_size = 5;
    return cfg;
}

std::string canonical(const ExperimentReport& r) {
    return without_timing(nlohmann::json(r)).dump();
}

}

TEST_SUITE("experiment") {

TEST_CASE("policy names round-trip") {
    for (auto policy : {SaturationPolicy::discard_and_count, SaturationPolicy::escalate_precision,
                        SaturationPolicy::tally_as_other}) {
        CHECK(parse_saturation_policy(to_string(policy)) == policy);
    }
    CHECK_THROWS_AS(parse_saturation_policy("ignore"), std::invalid_argument);
}

TEST_CASE("tallies do not depend on workers or chunking") {
    const auto cfg = config(2, 4, 0, 4, 5000);
    const Tally a = collect(cfg, {1, 1024});
    const Tally b = collect(cfg, {4, 100});
    const Tally c = collect(cfg, {16, 7});
    CHECK(a.resolved == b.resolved);
    CHECK(a.resolved == c.resolved);
    CHECK(a.saturated == c.saturated);
    CHECK(a.raw_saturated == c.raw_saturated);
    CHECK(a.samples == 5000);
}

TEST_CASE("reports are identical across worker counts") {
    const auto cfg = config(3, 6, 1, 6, 4000);
    const auto one = canonical(run_distribution_experiment(cfg, {1}));
    CHECK(one == canonical(run_distribution_experiment(cfg, {4})));
    CHECK(one == canonical(run_distribution_experiment(cfg, {16})));
}

TEST_CASE("empty run") {
    const auto r = run_distribution_experiment(config(2, 4, 0, 8, 0));
    CHECK(r.samples == 0);
    CHECK(r.other.count == 0);
    for (const auto& bin : r.bins) CHECK(bin.count == 0);
    CHECK(r.passed);
}

TEST_CASE("saturation policies") {
    // e = 1 at n = 3 saturates often, which exercises every policy.
    auto cfg = config(2, 3, 0, 1, 3000);
    cfg.saturation_policy = SaturationPolicy::discard_and_count;
    const Tally discard = collect(cfg);
    CHECK(discard.discarded == discard.raw_saturated);
    CHECK(discard.saturated.empty());
    CHECK(discard.kept() == 3000 - discard.discarded);

    cfg.saturation_policy = SaturationPolicy::tally_as_other;
    const Tally keep = collect(cfg);
    CHECK(keep.discarded == 0);
    CHECK(keep.raw_saturated == discard.raw_saturated);

    cfg.saturation_policy = SaturationPolicy::escalate_precision;
    const Tally esc = collect(cfg);
    CHECK(esc.escalated == esc.raw_saturated);
    std::uint64_t still = 0;
    for (const auto& [k, c] : esc.saturated) still += c;
    CHECK(still < esc.raw_saturated);
}

TEST_CASE("distribution experiment agrees with the limit at moderate n") {
    auto cfg = config(2, 10, 0, 10, 20000, 42);
    cfg.tracked_max_size = 6;
    const auto r = run_distribution_experiment(cfg);
    REQUIRE(r.target);
    CHECK(r.target->theory == doctest::Approx(0.288788095087).epsilon(1e-9));
    CHECK(r.target->within_wilson);
    REQUIRE(r.chi_square);
    CHECK_FALSE(r.chi_square->rejected);
    CHECK(r.passed);
}

TEST_CASE("moment with trivial target is exactly one") {
    auto cfg = config(2, 3, 1, 8, 2000);
    const auto r = run_moment_experiment(cfg, {Partition{}});
    REQUIRE(r.moments.size() == 2);
    for (const auto& row : r.moments) {
        CHECK(row.mean == 1.0);
        CHECK(row.std_error == 0.0);
    }
}

TEST_CASE("moment experiment guards") {
    auto cfg = config(2, 3, 0, 4, 100);
    CHECK_THROWS_AS(run_moment_experiment(cfg, {Partition{5}}), std::invalid_argument);
    CHECK_THROWS_AS(run_moment_experiment(cfg, {Partition{4, 3}}), std::invalid_argument);
}

TEST_CASE("moment means track the exact finite-n value") {
    auto cfg = config(2, 1, 0, 10, 100000, 5);
    const auto r = run_moment_experiment(cfg, {Partition{1}});
    const auto& row = r.moments.front();
    CHECK(row.quantity == "coker");
    CHECK(row.target_exact == "1/2");
    CHECK(std::abs(row.mean - 0.5) < 3 * row.std_error);
    CHECK(r.passed);
}

TEST_CASE("saturation sweep for one column is exact") {
    const auto s = run_saturation_sweep(Prime(2), 0, 1, {2, 4}, 40000, 3);
    REQUIRE(s.rows.size() == 2);
    CHECK(*s.rows[0].exact == 0.25);
    CHECK(*s.rows[1].exact == 0.0625);
    for (const auto& row : s.rows) CHECK(*row.within_3sigma);
    const auto u1 = run_saturation_sweep(Prime(2), 1, 1, {2}, 10, 3);
    CHECK(*u1.rows[0].exact == 0.0625);
    CHECK_FALSE(run_saturation_sweep(Prime(2), 0, 3, {2}, 10, 3).rows[0].exact);
}

TEST_CASE("convergence sweep") {
    const auto s = run_convergence_sweep(Prime(2), 0, {1, 8}, 20000, 4, 10, 6);
    REQUIRE(s.rows.size() == 2);
    CHECK(*s.rows[1].tv_distance < *s.rows[0].tv_distance);
    const auto empty = run_convergence_sweep(Prime(2), 0, {2, 4}, 0, 4);
    for (const auto& row : empty.rows) CHECK_FALSE(row.tv_distance);
}

TEST_CASE("multiprime experiment") {
    ExperimentConfig cfg;
    cfg.spec.levels = {{Prime(2), 8}, {Prime(3), 6}};
    cfg.spec.n = 8;
    cfg.spec.seed = 2;
    cfg.spec.count = 20000;
    cfg.tracked_max_size = 3;
    const auto r = run_multiprime_experiment(cfg);
    REQUIRE(r.target);
    CHECK(r.target->theory == doctest::Approx(0.16175774305314220).epsilon(1e-9));
    CHECK(r.marginals.size() == 2);
    REQUIRE(r.independence);
    CHECK(r.passed);

    cfg.target = {Partition{1}};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

}
