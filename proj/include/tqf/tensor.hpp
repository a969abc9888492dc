#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace tqf {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Dense complex k-tensor, entries row-major over the multi-index.
class Tensor {
public:
    Tensor() = default;
    Tensor(std::vector<int> shape, std::vector<cplx> entries);
    static Tensor zeros(std::vector<int> shape);

    int order() const { return static_cast<int>(shape_.size()); }
    int dim(int leg) const { return shape_[leg]; }
    const std::vector<int>& shape() const { return shape_; }
    std::size_t size() const { return data_.size(); }

    const std::vector<cplx>& data() const { return data_; }
    std::vector<cplx>& data() { return data_; }
    cplx& at(const std::vector<int>& idx);
    const cplx& at(const std::vector<int>& idx) const;

    double norm_sq() const;
    double norm() const;
    bool is_zero() const { return norm_sq() == 0.0; }

    std::size_t stride(int leg) const;

private:
    std::vector<int> shape_;
    std::vector<cplx> data_;
};

/// Unordered pair {S, complement}. Canonical representative: party 0 in S.
class Bipartition {
public:
    Bipartition(int k, std::uint32_t side_mask);
    static Bipartition from_string(const std::string& letters, int k);  // "AB" or "AB|CD"

    int k() const { return k_; }
    std::uint32_t side() const { return side_; }        // canonical side, bit j = party j
    std::uint32_t complement() const { return full_mask() - side_; }
    std::uint32_t full_mask() const { return (1u << k_) - 1; }
    int side_count() const;
    bool is_singleton() const;

    bool mutually_laminar(const Bipartition& o) const;

    bool operator==(const Bipartition& o) const { return k_ == o.k_ && side_ == o.side_; }
    bool operator<(const Bipartition& o) const {
        return k_ != o.k_ ? k_ < o.k_ : side_ < o.side_;
    }

    std::string to_string() const;  // "AB|CD"

private:
    int k_;
    std::uint32_t side_;
};

/// Probability distribution on bipartitions of [k]; stores the support only.
class BipartitionDistribution {
public:
    BipartitionDistribution(int k, std::map<Bipartition, double> weights);

    int k() const { return k_; }
    const std::map<Bipartition, double>& weights() const { return weights_; }
    double weight(const Bipartition& b) const;
    std::vector<Bipartition> support() const;

    std::string to_string() const;

private:
    int k_;
    std::map<Bipartition, double> weights_;
};

/// Positive semidefinite trace-one Hermitian matrix.
class DensityOperator {
public:
    explicit DensityOperator(Matrix rho);

    int dim() const { return static_cast<int>(rho_.rows()); }
    const Matrix& matrix() const { return rho_; }
    std::vector<double> eigenvalues() const;  // descending
    double entropy_bits() const;

private:
    Matrix rho_;
};

// ---- operations ----

Tensor kronecker(const Tensor& a, const Tensor& b);
Tensor direct_sum(const Tensor& a, const Tensor& b);

/// S-flattening: rows indexed by the legs of `side` (ascending party order,
/// row-major), columns by the complement legs.
Matrix flatten_mask(const Tensor& t, std::uint32_t side_mask);
Matrix flatten(const Tensor& t, const Bipartition& b);

/// Marginal rho_S = psi_S psi_S^* / |psi|^2 on the canonical side of b.
DensityOperator marginal(const Tensor& t, const Bipartition& b);
DensityOperator marginal_on_side(const Tensor& t, std::uint32_t side_mask);

/// Eigenvalues of the b-marginal, descending, computed on the smaller side.
std::vector<double> marginal_spectrum(const Tensor& t, const Bipartition& b);

double bipartition_entropy(const Tensor& t, const Bipartition& b);  // bits
double weighted_entropy(const Tensor& t, const BipartitionDistribution& theta);

int flattening_rank(const Tensor& t, const Bipartition& b, double tol = 1e-9);

Tensor apply_local_maps(const Tensor& t, const std::vector<Matrix>& maps);

/// Axis permutation: result leg `positions[i]` carries t's leg i.
Tensor transpose_legs(const Tensor& t, const std::vector<int>& positions);

struct LaminarityWitness {
    Bipartition a, b;
};
bool is_laminar(const BipartitionDistribution& theta,
                std::optional<LaminarityWitness>* witness = nullptr);

struct RestrictedDistribution {
    BipartitionDistribution theta_prime;
    double normalization;  // C_{theta,ell}
};
/// Restriction of theta to the first ell parties. Throws if no bipartition
/// in the support restricts nontrivially (C = 0).
RestrictedDistribution restricted_distribution(const BipartitionDistribution& theta, int ell);

Tensor random_gaussian_tensor(const std::vector<int>& shape, std::uint64_t seed);

/// Standard normal deviate via explicit Box-Muller on mt19937_64 output,
/// identical across platforms for a fixed stream.
double standard_normal(std::mt19937_64& rng);

/// All bipartitions of [k] in canonical order.
std::vector<Bipartition> all_bipartitions(int k);

/// Parse "AB:0.5,A:0.125,..." into a distribution on bipartitions of [k].
BipartitionDistribution parse_distribution(const std::string& spec, int k);

double entropy_bits(const std::vector<double>& probs);
double binary_entropy(double p);

}  // namespace tqf
