#include "tqf/separation_lab.hpp"

#include "tqf/corpus.hpp"
#include "tqf/power_state.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace tqf {

namespace {

class VerdictBuilder {
public:
    explicit VerdictBuilder(std::string id) : start_(std::chrono::steady_clock::now()) {
        v_.claim_id = std::move(id);
    }

    void check(const std::string& name, double computed, double expected, double tol) {
        v_.computed[name] = computed;
        v_.expected[name] = {expected, tol};
    }

    void note(const std::string& s) {
        if (!v_.notes.empty()) v_.notes += "; ";
        v_.notes += s;
    }

    void deterministic(bool d) { v_.deterministic = d; }

    ClaimVerdict finish() {
        v_.passed = true;
        for (const auto& [name, value] : v_.computed) {
            const auto& e = v_.expected.at(name);
            if (!(std::abs(value - e.value) <= e.tol)) v_.passed = false;
        }
        v_.runtime_ms = static_cast<long>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                              std::chrono::steady_clock::now() - start_)
                                              .count());
        return v_;
    }

private:
    ClaimVerdict v_;
    std::chrono::steady_clock::time_point start_;
};

double clamp_pos(double x) { return x > 0.0 ? x : 0.0; }

}  // namespace

nlohmann::json verdict_to_json(const ClaimVerdict& v) {
    nlohmann::json expected = nlohmann::json::object();
    for (const auto& [name, e] : v.expected)
        expected[name] = {{"value", e.value}, {"tol", e.tol}};
    nlohmann::json j{{"claim_id", v.claim_id},
                     {"passed", v.passed},
                     {"computed", v.computed},
                     {"expected", expected},
                     {"runtime_ms", v.runtime_ms}};
    if (!v.notes.empty()) j["notes"] = v.notes;
    if (!v.deterministic) j["deterministic"] = false;
    return j;
}

// ---- W4 machinery ----

bool w4_point_feasible(const W4Point& x, double tol) {
    auto in01 = [&](double a) { return a >= -tol && a <= 0.5 + tol; };
    if (!(in01(x.alpha) && in01(x.beta) && in01(x.gamma) && in01(x.delta) && in01(x.z)))
        return false;
    if (std::abs(x.alpha - x.beta) > x.z + tol) return false;
    if (std::abs(x.gamma - x.delta) > x.z + tol) return false;
    if (x.alpha + x.beta > 1.0 - x.z + tol) return false;
    if (x.gamma + x.delta > 1.0 - x.z + tol) return false;
    if (x.alpha + x.beta + x.gamma + x.delta > 1.0 + tol) return false;
    return true;
}

W4Point w4_transform(const W4Point& x) {
    if (!w4_point_feasible(x, 1e-9))
        throw std::invalid_argument("w4_transform: infeasible input point");
    double sigma = x.alpha + x.beta + x.gamma + x.delta;
    if (sigma >= 1.0 - 1e-12) {
        W4Point y = x;
        y.z = std::min(x.alpha + x.beta, x.gamma + x.delta);
        return y;
    }
    // smaller pair gets pushed up to make the sums meet 1; larger pair is
    // raised to 1/2 first if needed
    bool swap = (x.gamma + x.delta) > (x.alpha + x.beta);
    double a = swap ? x.gamma : x.alpha, b = swap ? x.delta : x.beta;
    double g = swap ? x.alpha : x.gamma, d = swap ? x.beta : x.delta;
    double gp = g + std::min(0.5 - (g + d), 1.0 - sigma);
    double ap = a + std::max(0.0, 0.5 - (a + b));
    double zp = gp + d;
    W4Point y;
    y.alpha = swap ? gp : ap;
    y.beta = swap ? d : b;
    y.gamma = swap ? ap : gp;
    y.delta = swap ? b : d;
    y.z = zp;
    return y;
}

Tensor w4_realization(const W4Point& x) {
    double sigma = x.alpha + x.beta + x.gamma + x.delta;
    if (std::abs(sigma - 1.0) > 1e-9)
        throw std::invalid_argument("w4_realization: coordinates must sum to 1");
    std::vector<Matrix> maps;
    for (double c : {x.alpha, x.beta, x.gamma, x.delta}) {
        Matrix m = Matrix::Zero(2, 2);
        m(0, 0) = 1.0;
        m(1, 1) = std::sqrt(std::max(0.0, c));
        maps.push_back(std::move(m));
    }
    return apply_local_maps(w_state(4), maps);
}

bool w4_constraint_check(const Partition& lam_a, const Partition& lam_b,
                         const Partition& lam_c, const Partition& lam_d,
                         const Partition& lam_ab) {
    int n = lam_a.n();
    if (lam_b.n() != n || lam_c.n() != n || lam_d.n() != n || lam_ab.n() != n)
        throw std::invalid_argument("w4_constraint_check: partition sizes differ");
    W4Point x;
    x.alpha = static_cast<double>(lam_a.part(1)) / n;
    x.beta = static_cast<double>(lam_b.part(1)) / n;
    x.gamma = static_cast<double>(lam_c.part(1)) / n;
    x.delta = static_cast<double>(lam_d.part(1)) / n;
    x.z = static_cast<double>(lam_ab.part(1)) / n;
    return w4_point_feasible(x, 1e-12);
}

// ---- closed formulas ----

double unit_subset_value(std::uint32_t subset_mask, const BipartitionDistribution& theta) {
    auto subset = [](std::uint32_t a, std::uint32_t b) { return (a & ~b) == 0; };
    double nested = 0.0;
    for (const auto& [b, w] : theta.weights())
        if (subset(subset_mask, b.side()) || subset(subset_mask, b.complement())) nested += w;
    return 1.0 - nested;
}

std::map<Bipartition, double> recognition_recover(int k,
                                                  const std::map<std::uint32_t, double>& values) {
    std::map<Bipartition, double> theta;
    auto strictly_contains = [](std::uint32_t big, std::uint32_t small) {
        return (small & ~big) == 0 && big != small;
    };
    for (int m = k - 1; m >= (k + 1) / 2; --m) {
        for (std::uint32_t s = 1; s < (1u << k) - 1; ++s) {
            if (std::popcount(s) != m) continue;
            if (2 * m == k && !(s & 1u)) continue;  // one side per bipartition at the midpoint
            Bipartition b(k, s);
            if (theta.count(b)) continue;
            double known = 0.0;
            for (const auto& [bp, w] : theta)
                if (strictly_contains(bp.side(), s) || strictly_contains(bp.complement(), s))
                    known += w;
            auto it = values.find(s);
            if (it == values.end())
                throw std::invalid_argument("recognition_recover: missing value for a subset");
            theta[b] = 1.0 - it->second - known;
        }
    }
    return theta;
}

BipartitionDistribution random_laminar_distribution(int k, std::mt19937_64& rng) {
    // singletons plus a nested chain of prefixes of a random party order;
    // for k = 4 this reaches every laminar family shape
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = k - 1; i > 0; --i) {
        int j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
        std::swap(perm[i], perm[j]);
    }
    std::vector<std::uint32_t> sides;
    for (int j = 0; j < k; ++j) sides.push_back(1u << j);  // singletons
    std::uint32_t prefix = 1u << perm[0];
    for (int i = 1; i + 1 < k; ++i) {
        prefix |= 1u << perm[i];
        sides.push_back(prefix);
    }
    std::map<Bipartition, double> w;
    double total = 0.0;
    for (std::uint32_t s : sides) {
        if ((rng() & 1u) == 0) continue;
        double x = 0.1 + static_cast<double>(rng() % 1000) / 1000.0;
        w[Bipartition(k, s)] += x;
        total += x;
    }
    if (w.empty()) {
        w[Bipartition(k, 1u)] = 1.0;
        total = 1.0;
    }
    for (auto& [b, x] : w) x /= total;
    // renormalize exactly
    double sum = 0.0;
    for (auto& [b, x] : w) sum += x;
    for (auto& [b, x] : w) x /= sum;
    return BipartitionDistribution(k, w);
}

// ---- claims ----

ClaimVerdict verify_sp_separation(double p, double theta_ab) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("verify_sp_separation: p in (0,1)");
    if (!(theta_ab > 0.0 && theta_ab <= 1.0))
        throw std::invalid_argument("verify_sp_separation: theta_AB in (0,1]");
    VerdictBuilder vb("sp-separation");

    Tensor t = s_p(p);
    std::map<Bipartition, double> w;
    w[Bipartition::from_string("AB", 4)] = theta_ab;
    if (theta_ab < 1.0)
        for (int j = 0; j < 4; ++j)
            w[Bipartition(4, 1u << j)] = (1.0 - theta_ab) / 4.0;
    BipartitionDistribution theta(4, w);

    double singleton_dev = 0.0;
    for (int j = 0; j < 4; ++j) {
        Matrix rho = marginal_on_side(t, 1u << j).matrix();
        singleton_dev = std::max(singleton_dev,
                                 (rho - Matrix::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff());
    }
    vb.check("singleton_marginal_dev", singleton_dev, 0.0, 1e-12);

    auto eig = marginal_spectrum(t, Bipartition::from_string("AB", 4));
    std::vector<double> expect_eig = {p / 2, p / 2, (1 - p) / 2, (1 - p) / 2};
    std::sort(expect_eig.begin(), expect_eig.end(), std::greater<double>());
    double eig_dev = 0.0;
    for (int i = 0; i < 4; ++i) eig_dev = std::max(eig_dev, std::abs(eig[i] - expect_eig[i]));
    vb.check("ab_eigenvalue_dev", eig_dev, 0.0, 1e-10);

    Bipartition ab = Bipartition::from_string("AB", 4);
    int rank_ab = flattening_rank(t, ab);
    if (rank_ab < 4) {
        // numerically at the boundary of the family: the AB rank collapses
        // and M recomputes from the observed ranks; the rank-4 checks above
        // do not apply
        vb.check("mtheta_boundary",
                 m_theta(t, theta) -
                     ((1.0 - theta_ab) + theta_ab * std::log2(static_cast<double>(rank_ab))),
                 0.0, 1e-12);
        vb.note("AB flattening rank collapsed to " + std::to_string(rank_ab) +
                "; M recomputed from ranks, separation checks skipped");
        return vb.finish();
    }

    PowerState pw = PowerState::kron_power(t, 4);
    PowerState proj = apply_bipartition_projector(pw, Partition({1, 1, 1, 1}), ab);
    double det_sq = p * p * (1 - p) * (1 - p) / 16.0;
    vb.check("projector_norm_sq", proj.norm_sq(), det_sq, 1e-9);

    UpperOptions uo;
    uo.level_n = 4;
    UpperReport ur = upper_level(t, theta, uo);
    vb.check("upper_minus_mtheta", ur.best_value_bits - ur.m_theta_bits, 0.0, 1e-9);

    // AB|CD spectrum (p/2, p/2, (1-p)/2, (1-p)/2) has entropy 1 + h(p), so
    // the gap to M = 1 + theta_AB is theta_AB * (1 - h(p))
    double h_theta = weighted_entropy(t, theta);
    double gap_expected = theta_ab * (1.0 - binary_entropy(p));
    vb.check("mtheta_minus_htheta", ur.m_theta_bits - h_theta, gap_expected, 1e-9);

    LowerOptions lo;
    lo.restarts = 4;
    lo.max_iters = 2000;
    ScalingReport sr = lower_local(t, theta, lo);
    double db = det_bound(t, ab);
    double composite = theta_ab * db + (1.0 - theta_ab) * 1.0;
    vb.check("lower_above_det_composite", clamp_pos(sr.achieved_entropy - composite), 0.0, 1e-9);
    vb.check("det_composite_above_mtheta", clamp_pos(composite - ur.m_theta_bits), 0.0, 1e-9);

    if (std::abs(p - 0.5) < 1e-12) vb.note("no separation at p=1/2");
    return vb.finish();
}

ClaimVerdict verify_qgamma(double gamma) {
    if (!(gamma >= 0.75 && gamma <= 1.0))
        throw std::invalid_argument("verify_qgamma: identity only claimed for gamma in [3/4,1]");
    VerdictBuilder vb("qgamma");

    Tensor t = q_gamma(gamma);
    Bipartition ab = Bipartition::from_string("AB", 4);
    CapacityReport cap = capacity(t);
    vb.check("capacity_dev", std::abs(cap.capacity - 1.0), 0.0, 1e-6);

    double c = c_psi_given_capacity(t, ab, cap.capacity);
    double c_expected = (1.0 - gamma) * std::pow(gamma / 3.0, 3);
    vb.check("c_psi_dev", std::abs(c - c_expected), 0.0, 1e-10);

    double h_ab = bipartition_entropy(t, ab);
    double db = entropy_max_with_det(4, c).value_bits;
    vb.check("det_bound_dev", std::abs(db - h_ab), 0.0, 1e-9);

    std::map<Bipartition, double> w{{ab, 1.0}};
    LowerOptions lo;
    lo.restarts = 4;
    lo.max_iters = 3000;
    ScalingReport sr = lower_local(t, BipartitionDistribution(4, w), lo);
    vb.check("lower_dev", std::abs(sr.achieved_entropy - h_ab), 0.0, 1e-4);
    return vb.finish();
}

ClaimVerdict verify_crossing(double w, int n) {
    if (!(w > 0.0 && w < 1.0)) throw std::invalid_argument("verify_crossing: w in (0,1)");
    VerdictBuilder vb("crossing");

    Tensor t = unit_tensor(2, 4);
    Bipartition ab = Bipartition::from_string("AB", 4);
    Bipartition bc = Bipartition::from_string("BC", 4);
    double refn = std::pow(t.norm(), n);

    PowerState pw = PowerState::kron_power(t, n);
    PowerState fwd = apply_ordered_product(pw, {{ab, Partition({2, 1, 1})}, {bc, Partition({2, 2})}});
    vb.check("forward_nonzero", is_nonvanishing(fwd, refn) ? 1.0 : 0.0, 1.0, 0.5);
    PowerState rev = apply_ordered_product(pw, {{bc, Partition({2, 2})}, {ab, Partition({2, 1, 1})}});
    vb.check("reversed_rel_norm", rev.norm() / refn, 0.0, 1e-10);

    std::map<Bipartition, double> tw{{ab, w}, {bc, 1.0 - w}};
    BipartitionDistribution theta(4, tw);
    UpperOptions uo;
    uo.level_n = n;
    uo.order = std::vector<Bipartition>{ab, bc};
    UpperReport ur = upper_level(t, theta, uo);
    double bound = 1.5 * w + (1.0 - w);
    vb.check("upper_level_shortfall", clamp_pos(bound - ur.best_value_bits), 0.0, 1e-9);

    double ent_dev = 0.0;
    for (const auto& b : all_bipartitions(4))
        ent_dev = std::max(ent_dev, std::abs(bipartition_entropy(t, b) - 1.0));
    vb.check("unit_bipartition_entropy_dev", ent_dev, 0.0, 1e-12);
    std::ostringstream os;
    os << "level-" << n << " upper value " << ur.best_value_bits << " bits at w=" << w;
    vb.note(os.str());
    return vb.finish();
}

ClaimVerdict unit_subset_formula(const BipartitionDistribution& theta) {
    if (!is_laminar(theta))
        throw std::invalid_argument("unit_subset_formula: theta must be laminar");
    VerdictBuilder vb("unit-subset");
    int k = theta.k();
    double lower_dev = 0.0, upper_dev = 0.0, upper_dev_large = 0.0;
    for (std::uint32_t s = 1; s < (1u << k) - 1; ++s) {
        double expect = unit_subset_value(s, theta);
        Tensor t = unit2_on_subset(s, k);
        LowerOptions lo;
        lo.restarts = 2;
        lo.max_iters = 300;
        ScalingReport sr = lower_local(t, theta, lo);
        lower_dev = std::max(lower_dev, std::abs(sr.achieved_entropy - expect));
        // Level 2 reaches the formula whenever the subset has at most k/2
        // legs: the crossing cuts then collapse to a single live cut. Larger
        // subsets can expose three or more distinct live cuts, where the
        // (1,1)-everywhere tuple dies at n=2 (the product of the per-cut copy
        // swaps is the global swap, which is +1 on the symmetric subspace);
        // level 4 reaches the formula through (2,2).
        UpperOptions uo;
        bool small = 2 * std::popcount(s) <= k;
        uo.level_n = small ? 2 : 4;
        UpperReport ur = upper_level(t, theta, uo);
        (small ? upper_dev : upper_dev_large) =
            std::max(small ? upper_dev : upper_dev_large,
                     std::abs(ur.best_value_bits - expect));
    }
    vb.check("max_lower_dev", lower_dev, 0.0, 1e-6);
    vb.check("max_upper_dev", upper_dev, 0.0, 1e-6);
    vb.check("max_upper_dev_large_subsets", upper_dev_large, 0.0, 1e-6);
    return vb.finish();
}

ClaimVerdict recognition_roundtrip(const BipartitionDistribution& theta) {
    if (!is_laminar(theta))
        throw std::invalid_argument("recognition_roundtrip: theta must be laminar");
    VerdictBuilder vb("recognition");
    int k = theta.k();
    std::map<std::uint32_t, double> values;
    for (std::uint32_t s = 1; s < (1u << k) - 1; ++s)
        values[s] = unit_subset_value(s, theta);
    auto recovered = recognition_recover(k, values);
    double dev = 0.0;
    for (const auto& b : all_bipartitions(k)) {
        double got = recovered.count(b) ? recovered.at(b) : 0.0;
        dev = std::max(dev, std::abs(got - theta.weight(b)));
    }
    vb.check("recovery_dev", dev, 0.0, 1e-9);
    return vb.finish();
}

ClaimVerdict w4_transform_claim(int npoints, int nthetas, std::uint64_t seed) {
    VerdictBuilder vb("w4-transform");
    std::mt19937_64 rng(seed);
    auto uniform = [&rng](double lo, double hi) {
        double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    };

    std::vector<std::array<double, 5>> thetas;
    for (int i = 0; i < nthetas; ++i) {
        std::array<double, 5> th;
        double sum = 0.0;
        for (auto& x : th) {
            x = uniform(0.0, 1.0);
            sum += x;
        }
        for (auto& x : th) x /= sum;
        thetas.push_back(th);
    }
    auto h_theta = [](const std::array<double, 5>& th, const W4Point& x) {
        return th[0] * binary_entropy(x.z) + th[1] * binary_entropy(x.alpha) +
               th[2] * binary_entropy(x.beta) + th[3] * binary_entropy(x.gamma) +
               th[4] * binary_entropy(x.delta);
    };

    int feasible_violations = 0, entropy_violations = 0, theta_violations = 0;
    double sigma_dev = 0.0, idem_dev = 0.0, realization_dev = 0.0;
    int found = 0;
    while (found < npoints) {
        W4Point x{uniform(0, 0.5), uniform(0, 0.5), uniform(0, 0.5), uniform(0, 0.5),
                  uniform(0, 0.5)};
        if (!w4_point_feasible(x, 0.0)) continue;
        ++found;
        W4Point y = w4_transform(x);
        if (!w4_point_feasible(y, 1e-12)) ++feasible_violations;
        sigma_dev = std::max(sigma_dev, std::abs(y.alpha + y.beta + y.gamma + y.delta - 1.0));
        auto he = [](double a, double b) { return binary_entropy(a) - binary_entropy(b); };
        if (he(y.alpha, x.alpha) < -1e-12 || he(y.beta, x.beta) < -1e-12 ||
            he(y.gamma, x.gamma) < -1e-12 || he(y.delta, x.delta) < -1e-12 ||
            he(y.z, x.z) < -1e-12)
            ++entropy_violations;
        W4Point y2 = w4_transform(y);
        idem_dev = std::max({idem_dev, std::abs(y2.alpha - y.alpha), std::abs(y2.beta - y.beta),
                             std::abs(y2.gamma - y.gamma), std::abs(y2.delta - y.delta),
                             std::abs(y2.z - y.z)});
        for (const auto& th : thetas)
            if (h_theta(th, y) < h_theta(th, x) - 1e-12) ++theta_violations;

        Tensor real = w4_realization(y);
        double second[5];
        const char* sides[5] = {"A", "B", "C", "D", "AB"};
        for (int i = 0; i < 5; ++i) {
            auto spec = marginal_spectrum(real, Bipartition::from_string(sides[i], 4));
            second[i] = spec.size() > 1 ? spec[1] : 0.0;
        }
        double want[5] = {y.alpha, y.beta, y.gamma, y.delta, y.z};
        for (int i = 0; i < 5; ++i) {
            double w = std::min(want[i], 1.0 - want[i]);
            realization_dev = std::max(realization_dev, std::abs(second[i] - w));
        }
    }
    vb.check("feasible_violations", feasible_violations, 0.0, 0.5);
    vb.check("coordinate_entropy_violations", entropy_violations, 0.0, 0.5);
    vb.check("theta_entropy_violations", theta_violations, 0.0, 0.5);
    vb.check("sigma_dev", sigma_dev, 0.0, 1e-12);
    vb.check("idempotence_dev", idem_dev, 0.0, 1e-12);
    vb.check("realization_dev", realization_dev, 0.0, 1e-9);
    return vb.finish();
}

ClaimVerdict w4_constraints_claim() {
    VerdictBuilder vb("w4-constraints");
    Tensor t = w_state(4);
    std::map<Bipartition, double> w;
    w[Bipartition::from_string("AB", 4)] = 0.2;
    for (int j = 0; j < 4; ++j) w[Bipartition(4, 1u << j)] = 0.2;
    BipartitionDistribution theta(4, w);

    UpperOptions uo;
    uo.level_n = 4;
    uo.prune_kron = false;  // the constraints under test must not prune the enumeration
    uo.record_feasible = true;
    UpperReport ur = upper_level(t, theta, uo);

    // identify the tuple slots by bipartition
    int idx_ab = -1, idx_s[4] = {-1, -1, -1, -1};
    for (int i = 0; i < static_cast<int>(ur.order.size()); ++i) {
        if (ur.order[i] == Bipartition::from_string("AB", 4))
            idx_ab = i;
        else
            for (int j = 0; j < 4; ++j)
                if (ur.order[i] == Bipartition(4, 1u << j)) idx_s[j] = i;
    }
    int violations = 0;
    for (const auto& ft : ur.feasible) {
        bool ok = w4_constraint_check(ft.partitions[idx_s[0]], ft.partitions[idx_s[1]],
                                      ft.partitions[idx_s[2]], ft.partitions[idx_s[3]],
                                      ft.partitions[idx_ab]);
        if (!ok) ++violations;
    }
    vb.check("constraint_violations", violations, 0.0, 0.5);
    vb.note("feasible tuples at n=4: " + std::to_string(ur.feasible_count));
    return vb.finish();
}

ClaimVerdict generic_separation_sample(int d, int trials, std::uint64_t seed) {
    if (d < 2 || trials < 1)
        throw std::invalid_argument("generic_separation_sample: need d >= 2, trials >= 1");
    VerdictBuilder vb("generic");
    vb.deterministic(false);
    Bipartition ab = Bipartition::from_string("AB", 4);
    int big_d = d * d;
    double threshold = std::pow(1.0 / big_d, big_d);
    int strict = 0, semistable_count = 0;
    for (int i = 0; i < trials; ++i) {
        Tensor t = random_gaussian_tensor({d, d, d, d}, seed + static_cast<std::uint64_t>(i));
        CapacityReport cap = capacity(t);
        if (!cap.semistable || !cap.converged) continue;
        ++semistable_count;
        double c = c_psi_given_capacity(t, ab, cap.capacity);
        double db = entropy_max_with_det(big_d, c).value_bits;
        if (c < threshold * (1.0 - 1e-9) && db < std::log2(static_cast<double>(big_d)) - 1e-12)
            ++strict;
    }
    double fraction = static_cast<double>(strict) / trials;
    vb.check("strict_fraction", fraction, 1.0, 0.1);
    vb.note("semistable " + std::to_string(semistable_count) + "/" + std::to_string(trials));

    // boundary witness: Q_{3/4} sits exactly at c = 1/256 and is excluded
    Tensor q = q_gamma(0.75);
    double cq = c_psi_given_capacity(q, ab, capacity(q).capacity);
    vb.check("qgamma_boundary_excluded", cq >= threshold * (1.0 - 1e-9) ? 1.0 : 0.0, 1.0, 0.5);
    return vb.finish();
}

ClaimVerdict lower_not_spectral_ingredients(int k) {
    if (k < 4) throw std::invalid_argument("lower_not_spectral_ingredients: need k >= 4");
    VerdictBuilder vb("not-spectral");

    Tensor core = ame_L(4);
    double uniform_dev = 0.0;
    for (const auto& b : all_bipartitions(4)) {
        auto spec = marginal_spectrum(core, b);
        int support = b.is_singleton() ? 3 : 9;
        for (int i = 0; i < static_cast<int>(spec.size()); ++i) {
            double want = i < support ? 1.0 / support : 0.0;
            uniform_dev = std::max(uniform_dev, std::abs(spec[i] - want));
        }
    }
    vb.check("core_uniform_dev", uniform_dev, 0.0, 1e-12);

    Tensor l = ame_L(k);
    vb.check("moment_residual", moment_map(l).residual, 0.0, 1e-12);

    // gap mechanism at the 3x3 pair scale: d = 9, so the largest possible
    // c value is 9^-9 and the 0.9-scaled threshold must fall strictly below
    // log2(9). The 0.9/27 displayed in the source material exceeds 9^-9, so
    // the scale is re-anchored at 0.9 * 9^-9.
    double c_thresh = 0.9 * std::pow(1.0 / 9.0, 9);
    double cprime = entropy_max_with_det(9, c_thresh).value_bits;
    double gap = std::log2(9.0) - cprime;
    vb.check("det_gap_positive", gap > 1e-3 ? 1.0 : 0.0, 1.0, 0.5);
    vb.note("E_det(0.9*9^-9) = " + std::to_string(cprime) + ", gap " + std::to_string(gap));

    if (k > 4) {
        std::map<Bipartition, double> w{{Bipartition::from_string("AB", k), 1.0}};
        BipartitionDistribution theta(k, w);
        auto restricted = restricted_distribution(theta, 4);
        double lhs = weighted_entropy(l, theta);
        double rhs = restricted.normalization * weighted_entropy(core, restricted.theta_prime);
        vb.check("embedding_entropy_dev", std::abs(lhs - rhs), 0.0, 1e-9);
    }
    return vb.finish();
}

ClaimVerdict embedding_identity_check(const Tensor& t, const BipartitionDistribution& theta,
                                      int k) {
    if (t.order() >= k)
        throw std::invalid_argument("embedding_identity_check: need t.k < k");
    VerdictBuilder vb("embedding");
    auto restricted = restricted_distribution(theta, t.order());  // throws when C = 0
    double c = restricted.normalization;
    Tensor emb = embed_standard(t, k);

    LowerOptions lo;
    lo.restarts = 3;
    lo.max_iters = 2000;
    double e_emb = lower_local(emb, theta, lo).achieved_entropy;
    double e_base = lower_local(t, restricted.theta_prime, lo).achieved_entropy;
    vb.check("lower_dev", std::abs(e_emb - c * e_base), 0.0, 1e-3);

    UpperOptions uo;
    uo.level_n = 4;
    UpperReport u_emb = upper_level(emb, theta, uo);
    UpperReport u_base = upper_level(t, restricted.theta_prime, uo);
    vb.check("upper_dev", std::abs(u_emb.best_value_bits - c * u_base.best_value_bits), 0.0, 1e-9);
    vb.check("feasible_count_dev",
             static_cast<double>(u_emb.feasible_count - u_base.feasible_count), 0.0, 0.5);
    return vb.finish();
}

// ---- registry ----

std::vector<std::string> claim_ids() {
    return {"sp-separation", "qgamma",  "crossing",    "unit-subset", "recognition",
            "w4-transform",  "w4-constraints", "generic", "not-spectral", "embedding"};
}

ClaimVerdict run_claim(const std::string& id, std::uint64_t seed) {
    if (id == "sp-separation") return verify_sp_separation(1.0 / 3.0, 0.5);
    if (id == "qgamma") return verify_qgamma(0.9);
    if (id == "crossing") return verify_crossing(0.5);
    if (id == "unit-subset" || id == "recognition") {
        std::mt19937_64 rng(seed);
        ClaimVerdict agg;
        agg.claim_id = id;
        agg.passed = true;
        double worst = 0.0;
        long ms = 0;
        for (int i = 0; i < 20; ++i) {
            auto theta = random_laminar_distribution(4, rng);
            ClaimVerdict v = id == "unit-subset" ? unit_subset_formula(theta)
                                                 : recognition_roundtrip(theta);
            agg.passed = agg.passed && v.passed;
            ms += v.runtime_ms;
            for (const auto& [name, val] : v.computed) {
                if (std::abs(val) > worst) worst = std::abs(val);
                if (agg.computed.count(name) == 0 || val > agg.computed[name]) {
                    agg.computed[name] = val;
                    agg.expected[name] = v.expected[name];
                }
            }
        }
        agg.runtime_ms = ms;
        agg.notes = "20 seeded random laminar distributions, worst deviation " +
                    std::to_string(worst);
        return agg;
    }
    if (id == "w4-transform") return w4_transform_claim(1000, 100, seed);
    if (id == "w4-constraints") return w4_constraints_claim();
    if (id == "generic") return generic_separation_sample(2, 50, seed);
    if (id == "not-spectral") return lower_not_spectral_ingredients(5);
    if (id == "embedding") {
        ClaimVerdict a = embedding_identity_check(
            unit_tensor(2, 3), parse_distribution("AB:1", 4), 4);
        std::map<Bipartition, double> w{{Bipartition::from_string("AB", 4), 0.5},
                                        {Bipartition::from_string("C", 4), 0.5}};
        ClaimVerdict b = embedding_identity_check(w_state(3), BipartitionDistribution(4, w), 4);
        ClaimVerdict agg;
        agg.claim_id = "embedding";
        agg.passed = a.passed && b.passed;
        agg.runtime_ms = a.runtime_ms + b.runtime_ms;
        for (const auto& [name, val] : a.computed) {
            agg.computed["unit_" + name] = val;
            agg.expected["unit_" + name] = a.expected[name];
        }
        for (const auto& [name, val] : b.computed) {
            agg.computed["w3_" + name] = val;
            agg.expected["w3_" + name] = b.expected[name];
        }
        // degenerate case must signal C = 0 explicitly
        bool threw = false;
        try {
            restricted_distribution(parse_distribution("AB:1", 4), 2);
        } catch (const std::domain_error&) {
            threw = true;
        }
        agg.computed["degenerate_c0_signaled"] = threw ? 1.0 : 0.0;
        agg.expected["degenerate_c0_signaled"] = {1.0, 0.5};
        agg.passed = agg.passed && threw;
        return agg;
    }
    throw std::invalid_argument("unknown claim id: " + id);
}

}  // namespace tqf
