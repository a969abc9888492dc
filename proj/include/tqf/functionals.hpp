#pragma once

#include "tqf/partitions.hpp"
#include "tqf/power_state.hpp"
#include "tqf/tensor.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace tqf {

/// Functional values are carried in bits everywhere; the F-scale value 2^E
/// is derived on demand.
inline double f_scale(double bits) { return std::exp2(bits); }

/// Theta-weighted sum of log2 flattening ranks; upper-bounds the level-n
/// upper functional for laminar theta.
double m_theta(const Tensor& t, const BipartitionDistribution& theta, double rank_tol = 1e-9);

struct UpperOptions {
    int level_n = 4;
    double nonvanish_tol = 1e-8;
    double rank_tol = 1e-9;
    bool prune_kron = true;        // Kronecker row-bound pruning (laminar only)
    bool record_feasible = false;  // keep the full list of feasible tuples
    std::optional<std::vector<Bipartition>> order;  // mandatory for non-laminar theta
    std::size_t max_entries = std::size_t{1} << 26;
};

struct FeasibleTuple {
    std::vector<Partition> partitions;  // aligned with UpperReport::order
    double value_bits;
};

struct UpperReport {
    int n = 0;
    double best_value_bits = 0.0;
    std::map<Bipartition, Partition> best_tuple;
    long feasible_count = 0;
    double m_theta_bits = 0.0;
    std::vector<Bipartition> order;       // product order used, left to right
    std::vector<FeasibleTuple> feasible;  // populated when record_feasible
};

/// Level-n evaluation of the upper quantum functional: enumerates partition
/// tuples, applies the projector product to psi^{(X)n} and maximizes the
/// theta-weighted diagram entropy over the nonvanishing ones. The result is a
/// certified lower bound on E^theta; m_theta_bits is the matching upper bound
/// when theta is laminar.
UpperReport upper_level(const Tensor& t, const BipartitionDistribution& theta,
                        const UpperOptions& opts = {});

enum class ScalingStatus { converged, max_iters, collapsed };

struct LowerOptions {
    double grad_tol = 1e-8;
    int max_iters = 10000;
    int restarts = 8;
    std::uint64_t seed = 20240901;
    double restart_sigma = 0.5;
};

struct ScalingReport {
    double achieved_entropy = 0.0;  // bits
    std::vector<Matrix> final_maps;
    double moment_residual = 0.0;
    int iterations = 0;
    ScalingStatus status = ScalingStatus::converged;
};

/// Local maximization of H_theta over products of invertible local maps
/// (Riemannian ascent over positive-definite factors, multi-start). Returns a
/// certified lower bound on E_theta together with the witness maps.
ScalingReport lower_local(const Tensor& t, const BipartitionDistribution& theta,
                          const LowerOptions& opts = {});

struct MomentMapResult {
    std::vector<Matrix> components;  // rho_j - I/d_j per leg
    double residual = 0.0;           // root-sum-square of Frobenius norms
};
MomentMapResult moment_map(const Tensor& t);

struct CapacityOptions {
    double residual_tol = 1e-8;
    int max_iters = 200000;
    double collapse_floor = 1e-12;
};

struct CapacityReport {
    double capacity = 0.0;
    std::vector<Matrix> minimizing_maps;  // determinant-one local maps
    double moment_residual = 0.0;
    bool semistable = true;
    bool converged = false;
    int iterations = 0;
};

/// inf over determinant-one local maps of ||g.t||, by moment-map geodesic
/// descent. Collapse below the instability floor reports capacity 0.
CapacityReport capacity(const Tensor& t, const CapacityOptions& opts = {});

/// |det(flatten(t,b))|^2 / capacity^(2d) for a balanced bipartition.
double c_psi(const Tensor& t, const Bipartition& b, const CapacityOptions& opts = {});
double c_psi_given_capacity(const Tensor& t, const Bipartition& b, double cap);

struct EntropyMaxResult {
    double value_bits = 0.0;
    std::vector<double> maximizer;  // descending probability vector
    double gamma = 0.0;
};

/// Exact S_k(c): maximum entropy of a k-outcome distribution with
/// probability product at most c. c = 0 is handled as the limit log2(k-1).
EntropyMaxResult entropy_max_with_det(int k, double c);

/// Independent brute-force check of S_k(c): grid search over ordered
/// probability vectors plus a constraint-respecting local polish.
double entropy_max_with_det_oracle(int k, double c, int grid);

/// Determinant upper bound on the single-bipartition lower functional.
double det_bound(const Tensor& t, const Bipartition& b, const CapacityOptions& opts = {});

// shared internals, exposed for gradient tests
std::vector<Matrix> entropy_gradient(const Tensor& phi_normalized,
                                     const BipartitionDistribution& theta,
                                     double* weighted_entropy_out = nullptr);

Matrix hermitian_exp(const Matrix& h);

}  // namespace tqf
