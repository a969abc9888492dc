#include "tqf/functionals.hpp"

#include "tqf/corpus.hpp"
#include "tqf/json_io.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>

using namespace tqf;

namespace {

std::vector<Matrix> random_sl_maps(const Tensor& t, std::mt19937_64& rng, double sigma = 0.4) {
    std::vector<Matrix> out;
    for (int j = 0; j < t.order(); ++j) {
        int d = t.dim(j);
        Matrix h = Matrix::Zero(d, d);
        for (int a = 0; a < d; ++a)
            for (int b = a; b < d; ++b) {
                if (a == b) {
                    h(a, a) = sigma * standard_normal(rng);
                } else {
                    cplx z(standard_normal(rng), standard_normal(rng));
                    h(a, b) = sigma * z / std::sqrt(2.0);
                    h(b, a) = std::conj(h(a, b));
                }
            }
        h -= (h.trace() / static_cast<double>(d)) * Matrix::Identity(d, d);  // det 1
        out.push_back(hermitian_exp(h));
    }
    return out;
}

}  // namespace

TEST_CASE("m_theta") {
    auto theta = parse_distribution("AB:0.5,A:0.125,B:0.125,C:0.125,D:0.125", 4);
    CHECK(m_theta(s_p(1.0 / 3.0), theta) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(m_theta(unit_tensor(3, 4), theta) ==
          doctest::Approx(std::log2(3.0)).epsilon(1e-12));
    // theta_AB-weighted rank profile of S_p: (1-w) + 2w
    auto t2 = parse_distribution("AB:0.25,A:0.1875,B:0.1875,C:0.1875,D:0.1875", 4);
    CHECK(m_theta(s_p(0.7), t2) == doctest::Approx(1.25).epsilon(1e-12));
}

TEST_CASE("upper_level on S_p hits m_theta with the paper tuple") {
    Tensor t = s_p(1.0 / 3.0);
    auto theta = parse_distribution("AB:0.5,A:0.125,B:0.125,C:0.125,D:0.125", 4);
    UpperOptions uo;
    uo.level_n = 4;
    UpperReport r = upper_level(t, theta, uo);
    CHECK(r.best_value_bits == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(r.best_value_bits == doctest::Approx(r.m_theta_bits).epsilon(1e-12));
    CHECK(r.best_tuple.at(Bipartition::from_string("AB", 4)).parts ==
          std::vector<int>{1, 1, 1, 1});
    for (int j = 0; j < 4; ++j)
        CHECK(r.best_tuple.at(Bipartition(4, 1u << j)).parts == std::vector<int>{2, 2});
    CHECK(r.best_value_bits <= r.m_theta_bits + 1e-9);
}

TEST_CASE("upper_level pruning is sound") {
    Tensor t = s_p(0.3);
    auto theta = parse_distribution("AB:0.5,A:0.125,B:0.125,C:0.125,D:0.125", 4);
    UpperOptions with, without;
    with.level_n = without.level_n = 4;
    with.record_feasible = without.record_feasible = true;
    without.prune_kron = false;
    UpperReport a = upper_level(t, theta, with);
    UpperReport b = upper_level(t, theta, without);
    CHECK(a.feasible_count == b.feasible_count);
    CHECK(a.best_value_bits == doctest::Approx(b.best_value_bits).epsilon(1e-14));
}

TEST_CASE("upper_level on unit tensors") {
    auto theta = parse_distribution("AB:0.5,C:0.5", 4);
    for (int n : {2, 4}) {
        UpperOptions uo;
        uo.level_n = n;
        CHECK(upper_level(unit_tensor(2, 4), theta, uo).best_value_bits ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
    UpperOptions u3;
    u3.level_n = 3;
    CHECK(upper_level(unit_tensor(3, 4), theta, u3).best_value_bits ==
          doctest::Approx(std::log2(3.0)).epsilon(1e-12));
}

TEST_CASE("upper_level level monotonicity") {
    Tensor t = s_p(1.0 / 3.0);
    auto theta = parse_distribution("AB:0.5,A:0.125,B:0.125,C:0.125,D:0.125", 4);
    UpperOptions u2, u4;
    u2.level_n = 2;
    u4.level_n = 4;
    double v2 = upper_level(t, theta, u2).best_value_bits;
    double v4 = upper_level(t, theta, u4).best_value_bits;
    CHECK(v4 >= v2 - 1e-9);
}

TEST_CASE("upper_level requires an order for non-laminar supports") {
    Tensor t = unit_tensor(2, 4);
    auto theta = parse_distribution("AB:0.5,BC:0.5", 4);
    UpperOptions uo;
    uo.level_n = 4;
    CHECK_THROWS_AS(upper_level(t, theta, uo), std::invalid_argument);
    uo.order = std::vector<Bipartition>{Bipartition::from_string("AB", 4),
                                        Bipartition::from_string("BC", 4)};
    UpperReport r = upper_level(t, theta, uo);
    CHECK(r.best_value_bits >= 1.25 - 1e-9);
    CHECK_THROWS_AS([&] {
        UpperOptions bad = uo;
        bad.order = std::vector<Bipartition>{Bipartition::from_string("AB", 4)};
        upper_level(t, theta, bad);
    }(), std::invalid_argument);
}

TEST_CASE("lower_local on units, W4 and Q_gamma") {
    LowerOptions lo;
    lo.restarts = 3;
    lo.max_iters = 2000;
    auto theta = parse_distribution("AB:0.5,A:0.25,C:0.25", 4);
    for (int n : {2, 3})
        CHECK(lower_local(unit_tensor(n, 4), theta, lo).achieved_entropy ==
              doctest::Approx(std::log2(static_cast<double>(n))).epsilon(1e-6));

    auto only_a = parse_distribution("A:1", 4);
    ScalingReport w4 = lower_local(w_state(4), only_a, lo);
    CHECK(w4.achieved_entropy == doctest::Approx(1.0).epsilon(1e-4));

    // explicit witness: diag(1, sqrt(3)) on leg A already reaches one bit
    std::vector<Matrix> maps(4, Matrix::Identity(2, 2));
    maps[0] = Matrix::Zero(2, 2);
    maps[0](0, 0) = 1.0;
    maps[0](1, 1) = std::sqrt(3.0);
    CHECK(weighted_entropy(apply_local_maps(w_state(4), maps), only_a) ==
          doctest::Approx(1.0).epsilon(1e-12));

    auto only_ab = parse_distribution("AB:1", 4);
    Tensor q = q_gamma(0.9);
    ScalingReport sq = lower_local(q, only_ab, lo);
    CHECK(sq.achieved_entropy ==
          doctest::Approx(bipartition_entropy(q, Bipartition::from_string("AB", 4)))
              .epsilon(1e-4));
}

TEST_CASE("lower_local status reporting") {
    // exhausting the iteration budget is a status, not an error
    LowerOptions lo;
    lo.max_iters = 2;
    lo.restarts = 0;
    lo.grad_tol = 1e-30;
    Tensor t = random_gaussian_tensor({2, 2, 2, 2}, 321);
    ScalingReport r = lower_local(t, parse_distribution("AB:1", 4), lo);
    CHECK(r.status == ScalingStatus::max_iters);
    CHECK(r.iterations <= 2);
    CHECK(r.final_maps.size() == 4);
}

TEST_CASE("lower_local never loses to the start") {
    LowerOptions lo;
    lo.restarts = 2;
    lo.max_iters = 500;
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 3; ++trial) {
        Tensor t = random_gaussian_tensor({2, 2, 2, 2}, 500 + trial);
        auto theta = parse_distribution("AB:0.5,A:0.25,D:0.25", 4);
        ScalingReport r = lower_local(t, theta, lo);
        CHECK(r.achieved_entropy >= weighted_entropy(t, theta) - 1e-9);
    }
}

TEST_CASE("sandwich for laminar theta on corpus tensors") {
    auto theta = parse_distribution("AB:0.5,A:0.125,B:0.125,C:0.125,D:0.125", 4);
    LowerOptions lo;
    lo.restarts = 2;
    lo.max_iters = 1000;
    UpperOptions uo;
    uo.level_n = 2;
    for (const Tensor& t : {s_p(0.3), w_state(4), q_gamma(0.85), unit_tensor(2, 4)}) {
        double h = weighted_entropy(t, theta);
        double low = lower_local(t, theta, lo).achieved_entropy;
        double m = upper_level(t, theta, uo).m_theta_bits;
        CHECK(h <= low + 1e-9);
        CHECK(low <= m + 1e-9);
    }
}

TEST_CASE("entropy gradient matches finite differences") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 3; ++trial) {
        Tensor t = random_gaussian_tensor({2, 2, 2, 2}, 700 + trial);
        auto theta = parse_distribution("AB:0.4,A:0.3,D:0.3", 4);
        double h0 = 0.0;
        auto grad = entropy_gradient(t, theta, &h0);
        CHECK(h0 == doctest::Approx(weighted_entropy(t, theta)).epsilon(1e-12));
        for (int rep = 0; rep < 2; ++rep) {
            std::vector<Matrix> dirs;
            double predicted = 0.0;
            for (int j = 0; j < 4; ++j) {
                Matrix m = Matrix::Zero(2, 2);
                m(0, 0) = standard_normal(rng);
                m(1, 1) = standard_normal(rng);
                cplx z(standard_normal(rng), standard_normal(rng));
                m(0, 1) = z / std::sqrt(2.0);
                m(1, 0) = std::conj(m(0, 1));
                dirs.push_back(m);
                predicted += (m.adjoint() * grad[j]).trace().real();
            }
            auto perturbed = [&](double eps) {
                std::vector<Matrix> maps;
                for (int j = 0; j < 4; ++j)
                    maps.push_back(Matrix::Identity(2, 2) + eps * dirs[j]);
                return weighted_entropy(apply_local_maps(t, maps), theta);
            };
            double eps = 1e-5;
            double fd = (perturbed(eps) - perturbed(-eps)) / (2 * eps);
            CHECK(std::abs(fd - predicted) <= 1e-5 * std::max(1.0, std::abs(fd)));
        }
    }
}

TEST_CASE("moment map") {
    CHECK(moment_map(s_p(0.4)).residual < 1e-12);
    CHECK(moment_map(q_gamma(0.6)).residual < 1e-12);
    double w4res = moment_map(w_state(4)).residual;
    CHECK(w4res > 0.3);
    CHECK(w4res == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("capacity") {
    CapacityReport sp = capacity(s_p(0.25));
    CHECK(sp.converged);
    CHECK(sp.semistable);
    CHECK(sp.capacity == doctest::Approx(1.0).epsilon(1e-9));

    CapacityReport q = capacity(q_gamma(0.8));
    CHECK(q.capacity == doctest::Approx(1.0).epsilon(1e-9));

    CapacityReport w4 = capacity(w_state(4));
    CHECK_FALSE(w4.semistable);
    CHECK(w4.capacity == 0.0);

    // minimizing maps keep determinant one
    for (const auto& m : sp.minimizing_maps) CHECK(std::abs(m.determinant()) ==
                                                   doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("Kempf-Ness norm minimality at moment-map zero") {
    Tensor t = s_p(0.35);
    REQUIRE(moment_map(t).residual < 1e-10);
    std::mt19937_64 rng(29);
    for (int i = 0; i < 100; ++i) {
        auto g = random_sl_maps(t, rng);
        CHECK(apply_local_maps(t, g).norm() >= t.norm() - 1e-9);
    }
}

TEST_CASE("determinant is an SL invariant") {
    std::mt19937_64 rng(31);
    Bipartition ab = Bipartition::from_string("AB", 4);
    for (int i = 0; i < 10; ++i) {
        Tensor t = random_gaussian_tensor({2, 2, 2, 2}, 900 + i);
        auto g = random_sl_maps(t, rng);
        double d0 = std::abs(flatten(t, ab).determinant());
        double d1 = std::abs(flatten(apply_local_maps(t, g), ab).determinant());
        CHECK(std::abs(d0 - d1) <= 1e-9 * std::max(1.0, d0));
    }
}

TEST_CASE("c_psi values") {
    Bipartition ab = Bipartition::from_string("AB", 4);
    CHECK(c_psi(s_p(0.5), ab) == doctest::Approx(1.0 / 256.0).epsilon(1e-10));
    CHECK(c_psi(s_p(1.0 / 3.0), ab) == doctest::Approx(1.0 / 324.0).epsilon(1e-10));
    double g = 0.9;
    CHECK(c_psi(q_gamma(g), ab) ==
          doctest::Approx((1 - g) * std::pow(g / 3, 3)).epsilon(1e-10));
    CHECK_THROWS_AS(c_psi(random_gaussian_tensor({2, 3, 2, 2}, 1), Bipartition(4, 1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(c_psi(w_state(4), ab), std::domain_error);
}

TEST_CASE("entropy_max_with_det closed form") {
    auto em = entropy_max_with_det(2, 0.25);
    CHECK(em.value_bits == doctest::Approx(1.0));
    CHECK(em.maximizer[0] == doctest::Approx(0.5));

    CHECK(entropy_max_with_det(4, 1.0 / 256.0).value_bits == 2.0);
    CHECK(entropy_max_with_det(4, 0.02).value_bits == 2.0);

    auto mid = entropy_max_with_det(4, 1.0 / 324.0);
    CHECK(mid.gamma == doctest::Approx(0.876).epsilon(1e-3));
    CHECK(mid.value_bits == doctest::Approx(1.9291069663).epsilon(1e-9));
    double prod = 1.0;
    for (double p : mid.maximizer) prod *= p;
    CHECK(prod <= (1.0 / 324.0) * (1 + 1e-10));
    CHECK(prod == doctest::Approx(1.0 / 324.0).epsilon(1e-10));

    // c -> 0 approaches log2(k-1); c = 0 is that limit
    CHECK(entropy_max_with_det(4, 1e-30).value_bits ==
          doctest::Approx(std::log2(3.0)).epsilon(1e-6));
    CHECK(entropy_max_with_det(4, 0.0).value_bits == doctest::Approx(std::log2(3.0)));
    CHECK_THROWS_AS(entropy_max_with_det(4, -0.1), std::domain_error);
}

TEST_CASE("entropy_max_with_det matches the brute-force oracle") {
    for (double c : {1e-4, 1e-3, 1.0 / 324.0, 1.0 / 300.0}) {
        double exact = entropy_max_with_det(4, c).value_bits;
        double oracle = entropy_max_with_det_oracle(4, c, 200);
        CHECK(std::abs(exact - oracle) < 1e-3);
        CHECK(oracle <= exact + 1e-12);  // the oracle only produces feasible points
    }
    // k = 2: closed form h(p) with p(1-p) = c
    for (double c : {0.01, 0.1, 0.2}) {
        double p = (1 + std::sqrt(1 - 4 * c)) / 2;
        CHECK(entropy_max_with_det(2, c).value_bits ==
              doctest::Approx(binary_entropy(p)).epsilon(1e-12));
        CHECK(std::abs(entropy_max_with_det_oracle(2, c, 200) - binary_entropy(p)) < 1e-3);
    }
    CHECK(entropy_max_with_det_oracle(4, 1.0, 50) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("det_bound") {
    Bipartition ab = Bipartition::from_string("AB", 4);
    Tensor q = q_gamma(0.9);
    CHECK(det_bound(q, ab) ==
          doctest::Approx(bipartition_entropy(q, ab)).epsilon(1e-9));
    double sp_bound = det_bound(s_p(1.0 / 3.0), ab);
    CHECK(sp_bound == doctest::Approx(1.9291069663).epsilon(1e-6));
    CHECK(sp_bound < 2.0);
    CHECK_THROWS_AS(det_bound(random_gaussian_tensor({2, 3, 2, 2}, 2), Bipartition(4, 1)),
                    std::invalid_argument);
}

TEST_CASE("solver options JSON round trip") {
    SolverOptions o;
    o.tol = 1e-7;
    o.max_iters = 123;
    o.restarts = 3;
    o.seed = 42;
    o.level_n = 2;
    o.order = {"AB", "BC"};
    SolverOptions back = solver_options_from_json(solver_options_to_json(o));
    CHECK(back.tol == o.tol);
    CHECK(back.max_iters == o.max_iters);
    CHECK(back.restarts == o.restarts);
    CHECK(back.seed == o.seed);
    CHECK(back.level_n == o.level_n);
    CHECK(back.order == o.order);
}
