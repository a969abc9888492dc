#include "tqf/partitions.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <map>
#include <numeric>
#include <vector>

using namespace tqf;

namespace {

// independent oracle: partition counts by the standard two-variable recurrence
long long partition_count(int n) {
    // p(i, m) = partitions of i into parts <= m
    std::vector<std::vector<long long>> p(n + 1, std::vector<long long>(n + 1, 0));
    for (int m = 0; m <= n; ++m) p[0][m] = 1;
    for (int i = 1; i <= n; ++i)
        for (int m = 1; m <= n; ++m)
            p[i][m] = p[i][m - 1] + (i >= m ? p[i - m][m] : 0);
    return p[n][n];
}

long long factorial(int n) {
    long long f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace

TEST_CASE("partition enumeration order and counts") {
    auto two_rows = enumerate_partitions(4, 2);
    REQUIRE(two_rows.size() == 3);
    CHECK(two_rows[0].parts == std::vector<int>{4});
    CHECK(two_rows[1].parts == std::vector<int>{3, 1});
    CHECK(two_rows[2].parts == std::vector<int>{2, 2});

    CHECK(enumerate_partitions(4).size() == 5);
    CHECK(partition_count(10) == 42);
    for (int n = 1; n <= 10; ++n)
        CHECK(enumerate_partitions(n).size() == static_cast<std::size_t>(partition_count(n)));
}

TEST_CASE("conjugacy class sizes sum to n!") {
    for (int n = 1; n <= 6; ++n) {
        long long total = 0;
        for (const auto& c : conjugacy_classes(n)) total += c.class_size;
        CHECK(total == factorial(n));
    }
}

TEST_CASE("characters: closed forms") {
    for (const auto& c : conjugacy_classes(5)) {
        CHECK(character(Partition({5}), c) == 1);  // trivial representation
        int transpositions = 0;
        for (int part : c.parts) transpositions += part - 1;
        long long sign = transpositions % 2 == 0 ? 1 : -1;
        CHECK(character(Partition({1, 1, 1, 1, 1}), c) == sign);  // sign representation
    }
    CHECK(character(Partition({2, 2}), CycleType({2, 1, 1})) == 0);
    CHECK(character(Partition({1, 1, 1, 1}), CycleType({2, 1, 1})) == -1);
}

TEST_CASE("character at identity equals hook-length dimension") {
    for (int n = 1; n <= 8; ++n) {
        CycleType id(std::vector<int>(n, 1));
        for (const auto& lam : enumerate_partitions(n))
            CHECK(character(lam, id) == irrep_dimension(lam));
    }
}

TEST_CASE("character orthogonality and regular representation") {
    for (int n = 2; n <= 6; ++n) {
        auto classes = conjugacy_classes(n);
        auto lams = enumerate_partitions(n);
        for (std::size_t a = 0; a < lams.size(); ++a)
            for (std::size_t b = a; b < lams.size(); ++b) {
                long long inner = 0;
                for (const auto& c : classes)
                    inner += c.class_size * character(lams[a], c) * character(lams[b], c);
                CHECK(inner == (a == b ? factorial(n) : 0));
            }
        // regular representation: sum_lam dim * chi vanishes off the identity
        for (const auto& c : classes) {
            long long s = 0;
            for (const auto& lam : lams) s += irrep_dimension(lam) * character(lam, c);
            bool is_id = c.parts == std::vector<int>(n, 1);
            CHECK(s == (is_id ? factorial(n) : 0));
        }
    }
}

TEST_CASE("Burnside and specific dimensions") {
    long long sum_sq = 0;
    for (const auto& lam : enumerate_partitions(4))
        sum_sq += irrep_dimension(lam) * irrep_dimension(lam);
    CHECK(sum_sq == 24);
    CHECK(irrep_dimension(Partition({4})) == 1);
    CHECK(irrep_dimension(Partition({2, 1, 1})) == 3);
    CHECK(irrep_dimension(Partition({2, 2})) == 2);
}

TEST_CASE("diagram entropy") {
    CHECK(diagram_entropy(Partition({2, 2})) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(diagram_entropy(Partition({2, 1, 1})) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(diagram_entropy(Partition({6})) == doctest::Approx(0.0));
    for (const auto& lam : enumerate_partitions(6)) {
        double h = diagram_entropy(lam);
        CHECK(h >= 0.0);
        CHECK(h <= std::log2(static_cast<double>(lam.rows())) + 1e-12);
    }
}

TEST_CASE("row bound check") {
    CHECK(row_bound_check(Partition({3, 1}), Partition({2, 2}), Partition({2, 2})));
    CHECK_FALSE(row_bound_check(Partition({4}), Partition({2, 2}), Partition({3, 1})));
    CHECK_THROWS_AS(row_bound_check(Partition({2}), Partition({3}), Partition({3})),
                    std::invalid_argument);
}

TEST_CASE("permutations and cycle types") {
    CHECK(permutations(4).size() == 24);
    CHECK(permutations(1).size() == 1);
    CHECK(cycle_type_of({1, 0, 2, 3}) == std::vector<int>{2, 1, 1});
    CHECK(cycle_type_of({1, 2, 3, 0}) == std::vector<int>{4});
    std::map<std::vector<int>, long long> counts;
    for (const auto& p : permutations(5)) counts[cycle_type_of(p)]++;
    for (const auto& c : conjugacy_classes(5)) CHECK(counts[c.parts] == c.class_size);
}

TEST_CASE("partition validation") {
    CHECK_THROWS_AS(Partition({1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(Partition({2, 0}), std::invalid_argument);
    CHECK_THROWS_AS(character(Partition({2, 1}), CycleType({2, 2})), std::invalid_argument);
}
