#include "tqf/tensor.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace tqf {

double entropy_bits(const std::vector<double>& probs) {
    double h = 0.0;
    for (double p : probs)
        if (p > 1e-14) h -= p * std::log2(p);
    return h;
}

double binary_entropy(double p) {
    return entropy_bits({p, 1.0 - p});
}

// ---- Tensor ----

Tensor::Tensor(std::vector<int> shape, std::vector<cplx> entries)
    : shape_(std::move(shape)), data_(std::move(entries)) {
    std::size_t expect = 1;
    for (int d : shape_) {
        if (d <= 0) throw std::invalid_argument("tensor leg dimensions must be positive");
        expect *= static_cast<std::size_t>(d);
    }
    if (expect != data_.size())
        throw std::invalid_argument("tensor entry count does not match shape");
}

Tensor Tensor::zeros(std::vector<int> shape) {
    std::size_t total = 1;
    for (int d : shape) total *= static_cast<std::size_t>(d);
    return Tensor(std::move(shape), std::vector<cplx>(total, cplx(0, 0)));
}

std::size_t Tensor::stride(int leg) const {
    std::size_t s = 1;
    for (int j = order() - 1; j > leg; --j) s *= static_cast<std::size_t>(shape_[j]);
    return s;
}

cplx& Tensor::at(const std::vector<int>& idx) {
    std::size_t lin = 0;
    for (int j = 0; j < order(); ++j) lin = lin * shape_[j] + idx[j];
    return data_[lin];
}

const cplx& Tensor::at(const std::vector<int>& idx) const {
    return const_cast<Tensor*>(this)->at(idx);
}

double Tensor::norm_sq() const {
    double s = 0.0;
    for (const cplx& z : data_) s += std::norm(z);
    return s;
}

double Tensor::norm() const { return std::sqrt(norm_sq()); }

// ---- Bipartition ----

Bipartition::Bipartition(int k, std::uint32_t side_mask) : k_(k) {
    if (k < 2 || k > 26) throw std::invalid_argument("bipartition: party count must be in [2,26]");
    std::uint32_t full = (1u << k) - 1;
    if (side_mask == 0 || side_mask >= full)
        throw std::invalid_argument("bipartition side must be nonempty and proper");
    side_ = (side_mask & 1u) ? side_mask : (full ^ side_mask);
}

Bipartition Bipartition::from_string(const std::string& letters, int k) {
    std::string side = letters;
    auto bar = side.find('|');
    if (bar != std::string::npos) side = side.substr(0, bar);
    std::uint32_t mask = 0;
    for (char ch : side) {
        if (ch < 'A' || ch >= 'A' + k)
            throw std::invalid_argument("bipartition letter out of range: " + std::string(1, ch));
        mask |= 1u << (ch - 'A');
    }
    return Bipartition(k, mask);
}

int Bipartition::side_count() const { return std::popcount(side_); }

bool Bipartition::is_singleton() const {
    return side_count() == 1 || side_count() == k_ - 1;
}

bool Bipartition::mutually_laminar(const Bipartition& o) const {
    auto subset = [](std::uint32_t a, std::uint32_t b) { return (a & ~b) == 0; };
    std::uint32_t s = side_, t = o.side_, tc = o.complement();
    return subset(s, t) || subset(s, tc) || subset(t, s) || subset(tc, s);
}

std::string Bipartition::to_string() const {
    std::string a, b;
    for (int j = 0; j < k_; ++j)
        ((side_ >> j) & 1u ? a : b) += static_cast<char>('A' + j);
    return a + "|" + b;
}

// ---- BipartitionDistribution ----

BipartitionDistribution::BipartitionDistribution(int k, std::map<Bipartition, double> weights)
    : k_(k) {
    double sum = 0.0;
    for (const auto& [b, w] : weights) {
        if (b.k() != k) throw std::invalid_argument("distribution: bipartition party count mismatch");
        if (w < 0) throw std::invalid_argument("distribution weights must be nonnegative");
        if (w > 0) weights_.emplace(b, w);
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("distribution weights must sum to 1");
    if (weights_.empty()) throw std::invalid_argument("distribution has empty support");
}

double BipartitionDistribution::weight(const Bipartition& b) const {
    auto it = weights_.find(b);
    return it == weights_.end() ? 0.0 : it->second;
}

std::vector<Bipartition> BipartitionDistribution::support() const {
    std::vector<Bipartition> out;
    for (const auto& [b, w] : weights_) out.push_back(b);
    return out;
}

std::string BipartitionDistribution::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [b, w] : weights_) {
        if (!first) os << ",";
        first = false;
        std::string s = b.to_string();
        os << s.substr(0, s.find('|')) << ":" << w;
    }
    return os.str();
}

// ---- DensityOperator ----

DensityOperator::DensityOperator(Matrix rho) : rho_(std::move(rho)) {
    if (rho_.rows() != rho_.cols()) throw std::invalid_argument("density operator must be square");
    double herm = (rho_ - rho_.adjoint()).norm();
    if (herm > 1e-12 * std::max(1.0, rho_.norm()))
        throw std::invalid_argument("density operator must be Hermitian");
    rho_ = (rho_ + rho_.adjoint().eval()) / 2.0;
    if (std::abs(rho_.trace().real() - 1.0) > 1e-10)
        throw std::invalid_argument("density operator must have trace 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10)
        throw std::invalid_argument("density operator must be positive semidefinite");
}

std::vector<double> DensityOperator::eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho_, Eigen::EigenvaluesOnly);
    std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + dim());
    std::sort(v.begin(), v.end(), std::greater<double>());
    return v;
}

double DensityOperator::entropy_bits() const {
    auto v = eigenvalues();
    for (double& x : v) x = std::max(x, 0.0);
    return tqf::entropy_bits(v);
}

// ---- operations ----

Tensor kronecker(const Tensor& a, const Tensor& b) {
    if (a.order() != b.order())
        throw std::invalid_argument("kronecker: party counts differ");
    int k = a.order();
    std::vector<int> shape(k);
    for (int j = 0; j < k; ++j) shape[j] = a.dim(j) * b.dim(j);
    Tensor out = Tensor::zeros(shape);
    std::vector<int> ia(k, 0), ib(k, 0), io(k);
    for (std::size_t la = 0; la < a.size(); ++la) {
        // decode la
        std::size_t rem = la;
        for (int j = k - 1; j >= 0; --j) {
            ia[j] = static_cast<int>(rem % a.dim(j));
            rem /= a.dim(j);
        }
        for (std::size_t lb = 0; lb < b.size(); ++lb) {
            std::size_t remb = lb;
            for (int j = k - 1; j >= 0; --j) {
                ib[j] = static_cast<int>(remb % b.dim(j));
                remb /= b.dim(j);
            }
            for (int j = 0; j < k; ++j) io[j] = ia[j] * b.dim(j) + ib[j];
            out.at(io) = a.data()[la] * b.data()[lb];
        }
    }
    return out;
}

Tensor direct_sum(const Tensor& a, const Tensor& b) {
    if (a.order() != b.order())
        throw std::invalid_argument("direct_sum: party counts differ");
    int k = a.order();
    std::vector<int> shape(k);
    for (int j = 0; j < k; ++j) shape[j] = a.dim(j) + b.dim(j);
    Tensor out = Tensor::zeros(shape);
    std::vector<int> idx(k, 0);
    for (std::size_t l = 0; l < a.size(); ++l) {
        std::size_t rem = l;
        for (int j = k - 1; j >= 0; --j) {
            idx[j] = static_cast<int>(rem % a.dim(j));
            rem /= a.dim(j);
        }
        out.at(idx) = a.data()[l];
    }
    for (std::size_t l = 0; l < b.size(); ++l) {
        std::size_t rem = l;
        for (int j = k - 1; j >= 0; --j) {
            idx[j] = static_cast<int>(rem % b.dim(j)) + a.dim(j);
            rem /= b.dim(j);
        }
        out.at(idx) = b.data()[l];
    }
    return out;
}

Matrix flatten_mask(const Tensor& t, std::uint32_t side_mask) {
    int k = t.order();
    std::vector<int> row_legs, col_legs;
    for (int j = 0; j < k; ++j)
        ((side_mask >> j) & 1u ? row_legs : col_legs).push_back(j);
    if (row_legs.empty() || col_legs.empty())
        throw std::invalid_argument("flatten: side must be nonempty and proper");
    std::size_t nrows = 1, ncols = 1;
    for (int j : row_legs) nrows *= t.dim(j);
    for (int j : col_legs) ncols *= t.dim(j);
    Matrix m(nrows, ncols);
    std::vector<int> idx(k, 0);
    for (std::size_t l = 0; l < t.size(); ++l) {
        std::size_t rem = l;
        for (int j = k - 1; j >= 0; --j) {
            idx[j] = static_cast<int>(rem % t.dim(j));
            rem /= t.dim(j);
        }
        std::size_t r = 0, c = 0;
        for (int j : row_legs) r = r * t.dim(j) + idx[j];
        for (int j : col_legs) c = c * t.dim(j) + idx[j];
        m(r, c) = t.data()[l];
    }
    return m;
}

Matrix flatten(const Tensor& t, const Bipartition& b) {
    if (b.k() != t.order()) throw std::invalid_argument("flatten: party count mismatch");
    return flatten_mask(t, b.side());
}

DensityOperator marginal_on_side(const Tensor& t, std::uint32_t side_mask) {
    double ns = t.norm_sq();
    if (ns == 0.0) throw std::invalid_argument("marginal: nonzero tensor required");
    Matrix f = flatten_mask(t, side_mask);
    Matrix rho = (f * f.adjoint()) / ns;
    return DensityOperator((rho + rho.adjoint().eval()) / 2.0);
}

DensityOperator marginal(const Tensor& t, const Bipartition& b) {
    if (b.k() != t.order()) throw std::invalid_argument("marginal: party count mismatch");
    return marginal_on_side(t, b.side());
}

std::vector<double> marginal_spectrum(const Tensor& t, const Bipartition& b) {
    if (b.k() != t.order()) throw std::invalid_argument("marginal: party count mismatch");
    double ns = t.norm_sq();
    if (ns == 0.0) throw std::invalid_argument("marginal: nonzero tensor required");
    Matrix f = flatten_mask(t, b.side());
    // form the Gram matrix on the smaller side
    Matrix g = f.rows() <= f.cols() ? Matrix(f * f.adjoint()) : Matrix(f.adjoint() * f);
    g = ((g + g.adjoint().eval()) / (2.0 * ns)).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(g, Eigen::EigenvaluesOnly);
    std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + g.rows());
    for (double& x : v) x = std::max(x, 0.0);
    std::sort(v.begin(), v.end(), std::greater<double>());
    return v;
}

double bipartition_entropy(const Tensor& t, const Bipartition& b) {
    return entropy_bits(marginal_spectrum(t, b));
}

double weighted_entropy(const Tensor& t, const BipartitionDistribution& theta) {
    if (theta.k() != t.order())
        throw std::invalid_argument("weighted_entropy: party count mismatch");
    double h = 0.0;
    for (const auto& [b, w] : theta.weights()) h += w * bipartition_entropy(t, b);
    return h;
}

int flattening_rank(const Tensor& t, const Bipartition& b, double tol) {
    Matrix f = flatten(t, b);
    Eigen::JacobiSVD<Matrix> svd(f);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol * sv(0)) ++r;
    return r;
}

Tensor apply_local_maps(const Tensor& t, const std::vector<Matrix>& maps) {
    if (static_cast<int>(maps.size()) != t.order())
        throw std::invalid_argument("apply_local_maps: one map per leg required");
    Tensor cur = t;
    for (int j = 0; j < t.order(); ++j) {
        const Matrix& m = maps[j];
        if (m.cols() != cur.dim(j))
            throw std::invalid_argument("apply_local_maps: dimension mismatch on leg " +
                                        std::to_string(j));
        int dout = static_cast<int>(m.rows());
        int din = cur.dim(j);
        std::size_t pre = 1, post = 1;
        for (int a = 0; a < j; ++a) pre *= cur.dim(a);
        for (int a = j + 1; a < cur.order(); ++a) post *= cur.dim(a);
        std::vector<int> nshape = cur.shape();
        nshape[j] = dout;
        Tensor next = Tensor::zeros(nshape);
        for (std::size_t p = 0; p < pre; ++p)
            for (int r = 0; r < dout; ++r)
                for (int c = 0; c < din; ++c) {
                    cplx coeff = m(r, c);
                    if (coeff == cplx(0, 0)) continue;
                    std::size_t src = (p * din + c) * post;
                    std::size_t dst = (p * dout + r) * post;
                    for (std::size_t q = 0; q < post; ++q)
                        next.data()[dst + q] += coeff * cur.data()[src + q];
                }
        cur = std::move(next);
    }
    return cur;
}

Tensor transpose_legs(const Tensor& t, const std::vector<int>& positions) {
    int k = t.order();
    if (static_cast<int>(positions.size()) != k)
        throw std::invalid_argument("transpose_legs: positions must cover all legs");
    std::vector<bool> used(k, false);
    for (int p : positions) {
        if (p < 0 || p >= k || used[p])
            throw std::invalid_argument("transpose_legs: invalid positions");
        used[p] = true;
    }
    std::vector<int> nshape(k);
    for (int j = 0; j < k; ++j) nshape[positions[j]] = t.dim(j);
    Tensor out = Tensor::zeros(nshape);
    std::vector<int> idx(k, 0), odx(k, 0);
    for (std::size_t l = 0; l < t.size(); ++l) {
        std::size_t rem = l;
        for (int j = k - 1; j >= 0; --j) {
            idx[j] = static_cast<int>(rem % t.dim(j));
            rem /= t.dim(j);
        }
        for (int j = 0; j < k; ++j) odx[positions[j]] = idx[j];
        out.at(odx) = t.data()[l];
    }
    return out;
}

bool is_laminar(const BipartitionDistribution& theta,
                std::optional<LaminarityWitness>* witness) {
    auto supp = theta.support();
    for (std::size_t i = 0; i < supp.size(); ++i)
        for (std::size_t j = i + 1; j < supp.size(); ++j)
            if (!supp[i].mutually_laminar(supp[j])) {
                if (witness) *witness = LaminarityWitness{supp[i], supp[j]};
                return false;
            }
    return true;
}

RestrictedDistribution restricted_distribution(const BipartitionDistribution& theta, int ell) {
    int k = theta.k();
    if (ell < 1 || ell >= k)
        throw std::invalid_argument("restricted_distribution: need 1 <= ell < k");
    std::uint32_t lmask = (1u << ell) - 1;
    std::map<Bipartition, double> acc;
    double c = 0.0;
    for (const auto& [b, w] : theta.weights()) {
        std::uint32_t part = b.side() & lmask;
        if (part == 0 || part == lmask) continue;  // restricts trivially
        Bipartition nb(ell, part);
        acc[nb] += w;
        c += w;
    }
    if (c == 0.0)
        throw std::domain_error("restricted_distribution: C = 0, no bipartition restricts nontrivially");
    for (auto& [b, w] : acc) w /= c;
    return RestrictedDistribution{BipartitionDistribution(ell, acc), c};
}

static double uniform01(std::mt19937_64& rng) {
    // 53-bit mantissa in (0,1]; explicit Box-Muller keeps streams platform-independent
    return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

double standard_normal(std::mt19937_64& rng) {
    double u1 = uniform01(rng), u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Tensor random_gaussian_tensor(const std::vector<int>& shape, std::uint64_t seed) {
    std::size_t total = 1;
    for (int d : shape) total *= static_cast<std::size_t>(d);
    std::mt19937_64 rng(seed);
    std::vector<cplx> data(total);
    for (std::size_t i = 0; i < total; ++i) {
        double u1 = uniform01(rng), u2 = uniform01(rng);
        double r = std::sqrt(-std::log(u1));  // radius for variance 1/2 per component
        data[i] = cplx(r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2));
    }
    return Tensor(shape, std::move(data));
}

std::vector<Bipartition> all_bipartitions(int k) {
    std::vector<Bipartition> out;
    std::uint32_t full = (1u << k) - 1;
    for (std::uint32_t m = 1; m < full; ++m)
        if (m & 1u) out.emplace_back(k, m);  // canonical representatives only
    return out;
}

BipartitionDistribution parse_distribution(const std::string& spec, int k) {
    std::map<Bipartition, double> weights;
    std::stringstream ss(spec);
    std::string term;
    while (std::getline(ss, term, ',')) {
        auto colon = term.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("distribution spec term missing ':': " + term);
        Bipartition b = Bipartition::from_string(term.substr(0, colon), k);
        double w = 0.0;
        try {
            w = std::stod(term.substr(colon + 1));
        } catch (const std::exception&) {
            throw std::invalid_argument("distribution spec has a malformed weight in: " + term);
        }
        weights[b] += w;
    }
    return BipartitionDistribution(k, weights);
}

}  // namespace tqf
