#include <doctest.h>

#include <sstream>

#include "coker/experiment.hpp"
#include "coker/report.hpp"

using namespace coker;

TEST_SUITE("report") {

TEST_CASE("labels") {
    CHECK(partition_label(Partition{}) == "trivial");
    CHECK(partition_label(Partition{2, 1}) == "2,1");
    CHECK(group_label(Partition{}, 2) == "1");
    CHECK(group_label(Partition{2, 1}, 2) == "Z/4+Z/2");
    CHECK(group_label(Partition{1, 1}, 3) == "Z/3+Z/3");
}

TEST_CASE("experiment reports round-trip through JSON") {
    ExperimentConfig cfg;
    cfg.spec = SampleSpec::single(Prime(2), 6, 4, 1, 9, 2000);
    cfg.tracked_max_size = 4;
    const auto r = run_distribution_experiment(cfg);
    const nlohmann::json j = r;
    CHECK(j.at("kind") == "distribution");
    CHECK(j.at("config").at("seed") == 9);
    CHECK(j.get<ExperimentReport>() == r);

    const auto m = run_moment_experiment(cfg, {Partition{1}});
    CHECK(nlohmann::json(m).get<ExperimentReport>() == m);
}

TEST_CASE("sweeps round-trip through JSON") {
    const auto s = run_saturation_sweep(Prime(2), 0, 1, {2, 4}, 500, 1);
    CHECK(nlohmann::json(s).get<SaturationSweep>() == s);
    const auto c = run_convergence_sweep(Prime(3), 0, {2, 3}, 500, 1);
    CHECK(nlohmann::json(c).get<ConvergenceSweep>() == c);
}

TEST_CASE("timing is stripped for comparison") {
    ExperimentReport r;
    r.timing.wall_seconds = 3.5;
    const auto stripped = without_timing(nlohmann::json(r));
    CHECK_FALSE(stripped.contains("timing"));
}

TEST_CASE("CSV output") {
    ExperimentConfig cfg;
    cfg.spec = SampleSpec::single(Prime(2), 6, 4, 0, 0, 300);
    cfg.tracked_max_size = 2;
    const auto r = run_distribution_experiment(cfg);
    std::ostringstream out;
    write_bins_csv(out, r);
    const std::string csv = out.str();
    CHECK(csv.rfind("partition,", 0) == 0);
    CHECK(csv.find("\ntrivial,") != std::string::npos);
    CHECK(csv.find("\nother,") != std::string::npos);
}

}
