#include <doctest.h>

#include <algorithm>
#include <set>

#include "coker/partition.hpp"

using coker::Partition;

TEST_SUITE("partition") {

TEST_CASE("construction validates and normalizes") {
    CHECK(Partition{}.empty());
    CHECK(Partition{2, 1}.size() == 3);
    CHECK(Partition{2, 1}.length() == 2);
    CHECK(Partition{2, 1}.largest() == 2);
    CHECK_THROWS_AS(Partition({1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(Partition({2, 0}), std::invalid_argument);
    CHECK_THROWS_AS(Partition({-1}), std::invalid_argument);
}

TEST_CASE("conjugate") {
    CHECK(Partition{}.conjugate() == Partition{});
    CHECK(Partition{2, 1}.conjugate() == Partition{2, 1});
    CHECK(Partition{3, 1}.conjugate() == Partition{2, 1, 1});
    CHECK(Partition{4}.conjugate() == Partition{1, 1, 1, 1});
}

TEST_CASE("conjugation is an involution preserving size") {
    for (const auto& lambda : coker::enumerate_partitions(10)) {
        CHECK(lambda.conjugate().conjugate() == lambda);
        CHECK(lambda.conjugate().size() == lambda.size());
        CHECK(lambda.conjugate().length() == lambda.largest());
    }
}

TEST_CASE("multiplicities") {
    // Indexed by part size; slot 0 is unused.
    CHECK(Partition{3, 1, 1}.multiplicities() == std::vector<int>{0, 2, 0, 1});
    CHECK(Partition{}.multiplicities() == std::vector<int>{0});
}

TEST_CASE("parsing and printing") {
    CHECK(coker::parse_partition("2,1") == Partition{2, 1});
    CHECK(coker::parse_partition("1,2") == Partition{2, 1});
    CHECK(coker::parse_partition("") == Partition{});
    CHECK(coker::parse_partition("trivial") == Partition{});
    CHECK(coker::parse_partition("()") == Partition{});
    CHECK(coker::parse_partition(" 3 , 1 ") == Partition{3, 1});
    CHECK_THROWS_AS(coker::parse_partition("2,x"), std::invalid_argument);
    CHECK_THROWS_AS(coker::parse_partition("0"), std::invalid_argument);
    CHECK(Partition{2, 1}.to_string() == "2,1");
    for (const auto& lambda : coker::enumerate_partitions(6)) {
        CHECK(coker::parse_partition(lambda.to_string()) == lambda);
    }
}

TEST_CASE("enumeration counts and order") {
    CHECK(coker::enumerate_partitions(0) == std::vector<Partition>{Partition{}});
    CHECK(coker::enumerate_partitions(2) ==
          std::vector<Partition>{Partition{}, Partition{1}, Partition{2}, Partition{1, 1}});
    CHECK(coker::enumerate_partitions(5).size() == 19);
    const int p_n[] = {1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77};
    for (int n = 0; n <= 12; ++n) CHECK(coker::partitions_of(n).size() == std::size_t(p_n[n]));

    const auto all = coker::enumerate_partitions(9);
    CHECK(std::is_sorted(all.begin(), all.end()));
    CHECK(std::set<Partition>(all.begin(), all.end()).size() == all.size());
}

TEST_CASE("subtypes") {
    CHECK(coker::is_subtype(Partition{1}, Partition{2, 1}));
    CHECK(coker::is_subtype(Partition{1, 1}, Partition{2, 1}));
    CHECK_FALSE(coker::is_subtype(Partition{1, 1, 1}, Partition{2, 1}));
    CHECK_FALSE(coker::is_subtype(Partition{3}, Partition{2, 1}));
    const auto subs = coker::subtypes_of(Partition{2, 1});
    CHECK(subs.front() == Partition{});
    CHECK(subs.back() == Partition{2, 1});
    CHECK(subs.size() == 5);  // (), 1, 2, 1,1, 2,1
}

TEST_CASE("direct sum merges parts") {
    CHECK(coker::direct_sum(Partition{3, 1}, Partition{2}) == Partition{3, 2, 1});
    CHECK(coker::direct_sum(Partition{}, Partition{2}) == Partition{2});
}

}
