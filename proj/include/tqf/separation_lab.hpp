#pragma once

#include "tqf/functionals.hpp"
#include "tqf/tensor.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace tqf {

/// Structured result of one scripted claim reproduction.
struct ClaimVerdict {
    struct Expectation {
        double value = 0.0;
        double tol = 0.0;
    };

    std::string claim_id;
    bool passed = false;
    std::map<std::string, double> computed;
    std::map<std::string, Expectation> expected;
    long runtime_ms = 0;
    std::string notes;
    bool deterministic = true;  // probabilistic claims never hard-fail the suite
};

nlohmann::json verdict_to_json(const ClaimVerdict& v);

/// Normalized second rows (A, B, C, D, AB) of a candidate partition tuple.
struct W4Point {
    double alpha = 0.0, beta = 0.0, gamma = 0.0, delta = 0.0, z = 0.0;
};

bool w4_point_feasible(const W4Point& x, double tol = 1e-12);

/// The constructive feasibility transform: returns a point with coordinate
/// sum one, z equal to the smaller pair sum, and coordinatewise binary
/// entropies at least as large as the input's.
W4Point w4_transform(const W4Point& x);

/// Weighted W state realizing a transformed point's marginal second
/// eigenvalues via local maps on W_4. Requires alpha+beta+gamma+delta = 1.
Tensor w4_realization(const W4Point& x);

/// The four inequality families on normalized second rows.
bool w4_constraint_check(const Partition& lam_a, const Partition& lam_b,
                         const Partition& lam_c, const Partition& lam_d,
                         const Partition& lam_ab);

/// Closed-form value of both functionals on the rank-2 unit tensor on S.
double unit_subset_value(std::uint32_t subset_mask, const BipartitionDistribution& theta);

/// Inverse of theta -> (E(unit2_S))_S for laminar theta, by the recognition
/// recursion (singletons first, then descending by side size).
std::map<Bipartition, double> recognition_recover(int k,
                                                  const std::map<std::uint32_t, double>& values);

/// Seeded random laminar distribution on bipartitions of [k].
BipartitionDistribution random_laminar_distribution(int k, std::mt19937_64& rng);

// ---- claims ----

ClaimVerdict verify_sp_separation(double p, double theta_ab);
ClaimVerdict verify_qgamma(double gamma);
ClaimVerdict verify_crossing(double w, int n = 4);
ClaimVerdict unit_subset_formula(const BipartitionDistribution& theta);
ClaimVerdict recognition_roundtrip(const BipartitionDistribution& theta);
ClaimVerdict w4_transform_claim(int npoints, int nthetas, std::uint64_t seed);
ClaimVerdict w4_constraints_claim();
ClaimVerdict generic_separation_sample(int d, int trials, std::uint64_t seed);
ClaimVerdict lower_not_spectral_ingredients(int k);
ClaimVerdict embedding_identity_check(const Tensor& t, const BipartitionDistribution& theta,
                                      int k);

/// Stable claim ids consumed by the CLI verify command.
std::vector<std::string> claim_ids();
ClaimVerdict run_claim(const std::string& id, std::uint64_t seed = 20240901);

}  // namespace tqf
