#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "coker/report.hpp"

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "coker");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = coker::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

}

TEST_SUITE("cli") {

TEST_CASE("measure table and json") {
    const auto table = run({"measure", "-p", "2", "-u", "0", "--max-size", "4"});
    CHECK(table.code == 0);
    CHECK(table.out.find("0.288788") != std::string::npos);

    const auto json = run({"measure", "-p", "2", "-u", "1", "--max-size", "0", "--format", "json"});
    REQUIRE(json.code == 0);
    const auto j = nlohmann::json::parse(json.out);
    REQUIRE(j.at("rows").size() == 1);
    CHECK(j.at("rows")[0].at("partition") == "trivial");
    CHECK(j.at("rows")[0].at("probability").get<double>() == doctest::Approx(0.577576).epsilon(1e-6));
    CHECK(j.at("tail_mass").get<double>() == doctest::Approx(0.422424).epsilon(1e-5));
    CHECK(j.at("invocation") == "coker measure -p 2 -u 1 --max-size 0 --format json");

    const auto csv = run({"measure", "-p", "3", "--max-size", "2", "--format", "csv"});
    CHECK(csv.out.find("\"1,1\"") != std::string::npos);
    CHECK(csv.out.find("\ntail,") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
    const auto composite = run({"measure", "-p", "4"});
    CHECK(composite.code == 2);
    CHECK(composite.err.find("not prime") != std::string::npos);
    CHECK(run({"simulate", "-p", "2", "-e", "63", "-N", "10"}).code == 2);
    CHECK(run({"simulate", "--primes", "2,2", "-N", "10"}).code == 2);
    CHECK(run({"simulate", "--policy", "bogus", "-N", "10"}).code == 2);
    CHECK(run({"measure"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"sweep", "sideways"}).code == 2);
    CHECK(run({"sweep", "convergence", "-e", "4,6", "-N", "10"}).code == 2);
}

TEST_CASE("help exits 0") {
    const auto help = run({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("simulate") != std::string::npos);
    CHECK(run({"simulate", "--help"}).code == 0);
}

TEST_CASE("simulate emits a reproducible report") {
    const std::vector<std::string> args = {"simulate", "-p", "2", "-n", "6", "-e", "8",
                                           "-N", "3000", "--seed", "42"};
    const auto a = run(args);
    auto with_workers = args;
    with_workers.insert(with_workers.end(), {"--workers", "4"});
    const auto b = run(with_workers);
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    auto ja = coker::without_timing(nlohmann::json::parse(a.out));
    auto jb = coker::without_timing(nlohmann::json::parse(b.out));
    CHECK(ja.at("invocation") == "coker simulate -p 2 -n 6 -e 8 -N 3000 --seed 42");
    ja.erase("invocation");
    jb.erase("invocation");
    CHECK(ja == jb);
    CHECK(ja.at("config").at("seed") == 42);
    CHECK(ja.at("version") == "0.1.0");
}

TEST_CASE("simulate with zero samples") {
    const auto r = run({"simulate", "-N", "0", "--assert"});
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.out).at("samples") == 0);
}

TEST_CASE("assert turns a failed check into exit 1") {
    // n = 1 is far from the limit, so the chi-square test rejects.
    const auto r = run({"simulate", "-p", "2", "-n", "1", "-e", "8", "-N", "20000", "--assert"});
    CHECK(r.code == 1);
    CHECK(run({"simulate", "-p", "2", "-n", "1", "-e", "8", "-N", "20000"}).code == 0);
}

TEST_CASE("multiprime simulate") {
    const auto r = run({"simulate", "--primes", "2,3", "-n", "6", "-N", "2000", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("kind") == "multiprime");
    CHECK(j.at("config").at("primes").size() == 2);
}

TEST_CASE("moments") {
    const auto r = run({"moments", "-p", "2", "-u", "0", "-n", "1", "--mu", "1", "-N", "20000",
                        "--format", "json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("moments")[0].at("target_exact") == "1/2");
    CHECK(run({"moments", "--mu", "1", "-e", "0", "-N", "10"}).code == 2);
}

TEST_CASE("verify") {
    const auto r = run({"verify", "--max-group-order", "16", "-p", "2", "--snf-samples", "50"});
    CHECK(r.code == 0);
    CHECK(r.out.find("[FAIL]") == std::string::npos);
    CHECK(r.out.find("[PASS] oracle p=2") != std::string::npos);
}

TEST_CASE("sweeps") {
    const auto s = run({"sweep", "saturation", "-p", "2", "-n", "1", "-u", "0", "--e", "2,4",
                        "-N", "5000", "--format", "json"});
    REQUIRE(s.code == 0);
    const auto j = nlohmann::json::parse(s.out);
    CHECK(j.at("rows").size() == 2);
    CHECK(j.at("rows")[0].at("exact").get<double>() == 0.25);

    const auto c = run({"sweep", "convergence", "--n-list", "1,2", "-N", "2000", "--format", "csv"});
    REQUIRE(c.code == 0);
    CHECK(c.out.rfind("n,", 0) == 0);
}

TEST_CASE("output file") {
    const std::string path = "cli_test_output.json";
    const auto r = run({"measure", "-p", "5", "--format", "json", "-o", path});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    CHECK(nlohmann::json::parse(in).at("p") == 5);
    std::remove(path.c_str());
    CHECK(run({"measure", "-p", "5", "-o", "/nonexistent/dir/x"}).code == 2);
}

}
