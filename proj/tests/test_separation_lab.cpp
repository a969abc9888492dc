#include "tqf/separation_lab.hpp"

#include "tqf/corpus.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>

using namespace tqf;

TEST_CASE("sp-separation claim") {
    ClaimVerdict v = verify_sp_separation(1.0 / 3.0, 0.5);
    CHECK(v.passed);
    // gap M - H_theta = theta_AB * (1 - h(p))
    CHECK(v.computed.at("mtheta_minus_htheta") ==
          doctest::Approx(0.5 * (1.0 - binary_entropy(1.0 / 3.0))).epsilon(1e-9));

    ClaimVerdict half = verify_sp_separation(0.5, 0.5);
    CHECK(half.passed);
    CHECK(half.computed.at("mtheta_minus_htheta") == doctest::Approx(0.0));
    CHECK(half.notes.find("no separation") != std::string::npos);

    // tiny p: the AB rank collapses to 2 and M recomputes from the ranks
    ClaimVerdict tiny = verify_sp_separation(1e-20, 0.5);
    CHECK(tiny.passed);
    CHECK(tiny.computed.count("mtheta_boundary") == 1);
    CHECK(tiny.notes.find("rank collapsed") != std::string::npos);

    CHECK_THROWS_AS(verify_sp_separation(0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(verify_sp_separation(0.3, 0.0), std::invalid_argument);
}

TEST_CASE("qgamma claim") {
    for (double g : {0.75, 0.9, 1.0}) CHECK(verify_qgamma(g).passed);
    CHECK_THROWS_AS(verify_qgamma(0.5), std::invalid_argument);
}

TEST_CASE("crossing claim") {
    ClaimVerdict v = verify_crossing(0.5);
    CHECK(v.passed);
    CHECK(v.computed.at("reversed_rel_norm") < 1e-10);
    ClaimVerdict small = verify_crossing(0.05);
    CHECK(small.passed);
}

TEST_CASE("unit subset closed formula examples") {
    auto d_ab = parse_distribution("AB:1", 4);
    CHECK(unit_subset_value(0b0011, d_ab) == doctest::Approx(0.0));
    auto singles = parse_distribution("A:0.25,B:0.25,C:0.25,D:0.25", 4);
    CHECK(unit_subset_value(0b0011, singles) == doctest::Approx(0.5));
    // S = [k] minus {i} gives 1 - theta_i
    CHECK(unit_subset_value(0b1110, singles) == doctest::Approx(0.75));
    CHECK(unit_subset_value(0b1110, d_ab) == doctest::Approx(1.0));

    CHECK(unit_subset_formula(parse_distribution("AB:0.5,A:0.25,C:0.25", 4)).passed);
    CHECK_THROWS_AS(unit_subset_formula(parse_distribution("AB:0.5,BC:0.5", 4)),
                    std::invalid_argument);
}

TEST_CASE("recognition recovers weights") {
    CHECK(recognition_roundtrip(parse_distribution("AB:1", 4)).passed);
    auto third = 1.0 / 3.0;
    std::map<Bipartition, double> w{{Bipartition::from_string("AB", 4), third},
                                    {Bipartition::from_string("A", 4), third},
                                    {Bipartition::from_string("C", 4), 1.0 - 2 * third}};
    BipartitionDistribution theta(4, w);
    CHECK(recognition_roundtrip(theta).passed);

    // distinct laminar distributions give distinct value vectors
    auto other = parse_distribution("AB:0.5,A:0.5", 4);
    bool differ = false;
    for (std::uint32_t s = 1; s < 15; ++s)
        if (std::abs(unit_subset_value(s, theta) - unit_subset_value(s, other)) > 1e-12)
            differ = true;
    CHECK(differ);

    // five parties: sides of both parity classes are recovered
    auto theta5 = parse_distribution("AB:0.3,ABC:0.3,A:0.4", 5);
    REQUIRE(is_laminar(theta5));
    CHECK(recognition_roundtrip(theta5).passed);
}

TEST_CASE("level-2 parity obstruction on large subsets") {
    // On unit2_{ABC}, the crossing bipartitions of theta reduce to the three
    // distinct live cuts A, B, C of the three live legs. A (1,1) diagram on a
    // cut forces the odd sector of that cut's copy swap, and the three swaps
    // compose to the global swap, which is +1 after symmetrization - so the
    // all-(1,1) tuple vanishes at n=2 and the best level-2 value loses the
    // cheapest cut. Level 4 recovers the formula via (2,2).
    auto theta = parse_distribution("A:0.4,AB:0.4,ACD:0.2", 4);
    REQUIRE(is_laminar(theta));
    std::uint32_t s_abc = 0b0111;
    double formula = unit_subset_value(s_abc, theta);
    CHECK(formula == doctest::Approx(1.0));

    Tensor t = unit2_on_subset(s_abc, 4);
    UpperOptions u2;
    u2.level_n = 2;
    CHECK(upper_level(t, theta, u2).best_value_bits == doctest::Approx(0.8).epsilon(1e-9));
    UpperOptions u4;
    u4.level_n = 4;
    CHECK(upper_level(t, theta, u4).best_value_bits == doctest::Approx(1.0).epsilon(1e-9));

    // the claim handles the split internally and still checks every subset
    CHECK(unit_subset_formula(theta).passed);
}

TEST_CASE("random laminar distributions are laminar") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 50; ++i) {
        auto theta = random_laminar_distribution(4, rng);
        CHECK(is_laminar(theta));
        double sum = 0.0;
        for (const auto& [b, w] : theta.weights()) sum += w;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("w4 transform examples") {
    W4Point fixed{0.25, 0.25, 0.25, 0.25, 0.5};
    W4Point out = w4_transform(fixed);
    CHECK(out.alpha == doctest::Approx(0.25));
    CHECK(out.z == doctest::Approx(0.5));

    W4Point x{0.1, 0.1, 0.1, 0.1, 0.3};
    W4Point y = w4_transform(x);
    CHECK(y.alpha == doctest::Approx(0.4));
    CHECK(y.beta == doctest::Approx(0.1));
    CHECK(y.gamma == doctest::Approx(0.4));
    CHECK(y.delta == doctest::Approx(0.1));
    CHECK(y.z == doctest::Approx(0.5));
    CHECK(w4_point_feasible(y));

    // idempotent, coordinatewise entropy monotone
    W4Point y2 = w4_transform(y);
    CHECK(y2.alpha == doctest::Approx(y.alpha));
    CHECK(y2.z == doctest::Approx(y.z));
    CHECK(binary_entropy(y.alpha) >= binary_entropy(x.alpha) - 1e-12);
    CHECK(binary_entropy(y.z) >= binary_entropy(x.z) - 1e-12);

    // realization reproduces the marginal second eigenvalues
    Tensor real = w4_realization(y);
    auto spec_a = marginal_spectrum(real, Bipartition::from_string("A", 4));
    CHECK(spec_a[1] == doctest::Approx(std::min(y.alpha, 1 - y.alpha)).epsilon(1e-9));
    auto spec_ab = marginal_spectrum(real, Bipartition::from_string("AB", 4));
    CHECK(spec_ab[1] == doctest::Approx(std::min(y.z, 1 - y.z)).epsilon(1e-9));

    CHECK_THROWS_AS(w4_transform(W4Point{0.5, 0.0, 0.0, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("w4 constraint check") {
    Partition two2({2, 2});
    // all second rows 1/2 violates both pair-sum bounds and the sum bound
    CHECK_FALSE(w4_constraint_check(two2, two2, two2, two2, two2));
    // the balanced feasible point: alpha=..=delta=1/4, z=1/2
    Partition three1({3, 1});
    CHECK(w4_constraint_check(three1, three1, three1, three1, two2));
    // z = 0 with alpha = 1/2, beta = 0 violates the triangle bound
    Partition four({4});
    CHECK_FALSE(w4_constraint_check(two2, four, four, four, four));
    // alpha = beta = 1/2 with z = 0 saturates alpha+beta <= 1-z and is feasible
    // (the tuple appears in the level-4 nonvanishing sweep)
    CHECK(w4_constraint_check(two2, two2, four, four, four));
    CHECK_FALSE(w4_constraint_check(two2, two2, two2, four, four));  // sigma > 1
    CHECK_THROWS_AS(w4_constraint_check(two2, two2, two2, two2, Partition({3})),
                    std::invalid_argument);
}

TEST_CASE("w4 claims") {
    CHECK(w4_transform_claim(200, 25, 1234).passed);
    CHECK(w4_constraints_claim().passed);
}

TEST_CASE("not-spectral and embedding claims") {
    CHECK(lower_not_spectral_ingredients(5).passed);
    CHECK(embedding_identity_check(unit_tensor(2, 3), parse_distribution("AB:1", 4), 4).passed);
    CHECK_THROWS_AS(
        embedding_identity_check(unit_tensor(2, 3), parse_distribution("ABC:1", 4), 4),
        std::domain_error);
}

TEST_CASE("generic sampling is reproducible") {
    ClaimVerdict a = generic_separation_sample(2, 8, 99);
    ClaimVerdict b = generic_separation_sample(2, 8, 99);
    CHECK(a.computed.at("strict_fraction") == b.computed.at("strict_fraction"));
    CHECK_FALSE(a.deterministic);
    CHECK(a.computed.at("qgamma_boundary_excluded") == 1.0);
}

TEST_CASE("claim registry") {
    auto ids = claim_ids();
    CHECK(ids.size() == 10);
    CHECK_THROWS_AS(run_claim("bogus"), std::invalid_argument);
}

TEST_CASE("verdict JSON shape") {
    ClaimVerdict v = verify_crossing(0.5);
    auto j = verdict_to_json(v);
    CHECK(j.at("claim_id") == "crossing");
    CHECK(j.at("passed") == true);
    CHECK(j.at("computed").is_object());
    CHECK(j.at("expected").is_object());
    CHECK(j.contains("runtime_ms"));
    for (const auto& [name, e] : j.at("expected").items()) {
        CHECK(e.contains("value"));
        CHECK(e.contains("tol"));
    }
}

TEST_CASE("semiring closure spot check in F-scale") {
    // t and u have agreeing upper and lower values for this laminar theta;
    // the direct sum is squeezed between sub- and super-additivity
    Tensor t = unit_tensor(2, 4);
    Tensor u = embed_standard(unit_tensor(2, 3), 4);
    Tensor sum = direct_sum(t, u);
    auto theta = parse_distribution("AB:1", 4);

    LowerOptions lo;
    lo.restarts = 3;
    lo.max_iters = 2000;
    double f_t = f_scale(lower_local(t, theta, lo).achieved_entropy);
    double f_u = f_scale(lower_local(u, theta, lo).achieved_entropy);
    double f_sum = f_scale(lower_local(sum, theta, lo).achieved_entropy);
    CHECK(std::abs(f_sum - (f_t + f_u)) < 2e-3 * (f_t + f_u));

    UpperOptions uo;
    uo.level_n = 2;
    double m_sum = m_theta(sum, theta);
    CHECK(f_sum <= f_scale(m_sum) + 2e-3);
    CHECK(upper_level(sum, theta, uo).best_value_bits <= m_sum + 1e-9);
}
