#include "tqf/functionals.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace tqf {

double m_theta(const Tensor& t, const BipartitionDistribution& theta, double rank_tol) {
    if (t.is_zero()) throw std::invalid_argument("m_theta: nonzero tensor required");
    double s = 0.0;
    for (const auto& [b, w] : theta.weights())
        s += w * std::log2(static_cast<double>(flattening_rank(t, b, rank_tol)));
    return s;
}

// ---- upper_level ----

namespace {

int side_dim(const Tensor& t, std::uint32_t mask) {
    int d = 1;
    for (int j = 0; j < t.order(); ++j)
        if ((mask >> j) & 1u) d *= t.dim(j);
    return d;
}

struct KronTriple {
    int target;  // step whose partition plays nu
    int a, b;    // steps whose partitions play mu, lambda
};

}  // namespace

UpperReport upper_level(const Tensor& t, const BipartitionDistribution& theta,
                        const UpperOptions& opts) {
    if (t.is_zero()) throw std::invalid_argument("upper_level: nonzero tensor required");
    if (theta.k() != t.order())
        throw std::invalid_argument("upper_level: party count mismatch");
    int n = opts.level_n;
    if (n < 1 || n > 6)
        throw std::invalid_argument("upper_level: level must be in [1,6]");

    bool laminar = is_laminar(theta);
    std::vector<Bipartition> order;
    if (opts.order) {
        order = *opts.order;
        auto sorted = order;
        std::sort(sorted.begin(), sorted.end());
        auto supp = theta.support();
        if (sorted != supp)
            throw std::invalid_argument("upper_level: order must list the support exactly once each");
    } else {
        if (!laminar)
            throw std::invalid_argument(
                "upper_level: non-laminar support requires an explicit projector order");
        order = theta.support();
    }
    int m = static_cast<int>(order.size());

    // candidate partitions per step, pruned by row bounds
    std::vector<std::vector<Partition>> cands(m);
    for (int i = 0; i < m; ++i) {
        int cap = std::min(side_dim(t, order[i].side()), side_dim(t, order[i].complement()));
        if (laminar || i == m - 1)
            cap = std::min(cap, flattening_rank(t, order[i], opts.rank_tol));
        cands[i] = enumerate_partitions(n, cap);
    }

    // Kronecker nonvanishing row bounds: partitions of a bipartition whose side
    // splits as the disjoint union of two other support sides.
    std::vector<std::vector<KronTriple>> triples_at(m);
    if (laminar && opts.prune_kron) {
        for (int s = 0; s < m; ++s)
            for (int a = 0; a < m; ++a)
                for (int b = a + 1; b < m; ++b) {
                    if (a == s || b == s) continue;
                    for (std::uint32_t ma : {order[a].side(), order[a].complement()})
                        for (std::uint32_t mb : {order[b].side(), order[b].complement()}) {
                            if (ma & mb) continue;
                            std::uint32_t u = ma | mb;
                            if (u == order[s].side() || u == order[s].complement()) {
                                int attach = std::min({s, a, b});
                                triples_at[attach].push_back({s, a, b});
                                goto next_pair;
                            }
                        }
                next_pair:;
                }
    }

    PowerState base = PowerState::kron_power(t, n, opts.max_entries);
    double ref_norm = std::pow(t.norm(), n);
    // P_(n) commutes with every isotypic factor, so one shared symmetrization
    // replaces the per-step P_(n) in the product.
    PowerState root = apply_isotypic(base, Partition(std::vector<int>{n}), (1u << t.order()) - 1);

    UpperReport report;
    report.n = n;
    report.order = order;
    report.m_theta_bits = m_theta(t, theta, opts.rank_tol);
    report.best_value_bits = -1.0;

    std::vector<double> weights(m);
    for (int i = 0; i < m; ++i) weights[i] = theta.weight(order[i]);

    std::vector<const Partition*> assign(m, nullptr);
    std::vector<PowerState> states;
    states.reserve(m + 1);
    states.push_back(std::move(root));

    // assign steps m-1 down to 0, sharing partial products along the DFS
    auto dfs = [&](auto&& self, int i) -> void {
        if (i < 0) {
            double value = 0.0;
            for (int j = 0; j < m; ++j) value += weights[j] * diagram_entropy(*assign[j]);
            ++report.feasible_count;
            if (value > report.best_value_bits + 1e-15) {
                report.best_value_bits = value;
                report.best_tuple.clear();
                for (int j = 0; j < m; ++j) report.best_tuple.emplace(order[j], *assign[j]);
            }
            if (opts.record_feasible) {
                FeasibleTuple ft;
                for (int j = 0; j < m; ++j) ft.partitions.push_back(*assign[j]);
                ft.value_bits = value;
                report.feasible.push_back(std::move(ft));
            }
            return;
        }
        for (const Partition& cand : cands[i]) {
            assign[i] = &cand;
            bool pruned = false;
            for (const KronTriple& tr : triples_at[i])
                if (!row_bound_check(*assign[tr.target], *assign[tr.a], *assign[tr.b])) {
                    pruned = true;
                    break;
                }
            if (pruned) continue;
            PowerState next = apply_isotypic(states.back(), cand, order[i].side());
            if (!is_nonvanishing(next, ref_norm, opts.nonvanish_tol)) continue;
            states.push_back(std::move(next));
            self(self, i - 1);
            states.pop_back();
        }
        assign[i] = nullptr;
    };
    dfs(dfs, m - 1);

    if (report.feasible_count == 0) {
        // cannot happen for nonzero tensors (the all-(n) tuple survives); kept as a guard
        report.best_value_bits = 0.0;
    }
    return report;
}

// ---- lower functional ----

Matrix hermitian_exp(const Matrix& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Eigen::VectorXd w = es.eigenvalues();
    Eigen::VectorXcd e(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) e(i) = std::exp(w(i));
    return es.eigenvectors() * e.asDiagonal() * es.eigenvectors().adjoint();
}

namespace {

// rho log2(rho) on the support (eigenvalues below cutoff contribute zero)
Matrix rho_log_rho(const Matrix& rho) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
    Eigen::VectorXcd w(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        double v = es.eigenvalues()(i);
        w(i) = v > 1e-14 ? v * std::log2(v) : 0.0;
    }
    return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

// partial trace of an operator on the legs of `mask` (ascending) down to leg j
Matrix partial_trace_to_leg(const Matrix& op, const Tensor& t, std::uint32_t mask, int leg) {
    std::vector<int> legs;
    for (int a = 0; a < t.order(); ++a)
        if ((mask >> a) & 1u) legs.push_back(a);
    int pos = static_cast<int>(std::find(legs.begin(), legs.end(), leg) - legs.begin());
    int dj = t.dim(leg);
    std::size_t pre = 1, post = 1;
    for (int a = 0; a < pos; ++a) pre *= t.dim(legs[a]);
    for (std::size_t a = pos + 1; a < legs.size(); ++a) post *= t.dim(legs[a]);
    Matrix out = Matrix::Zero(dj, dj);
    for (int r = 0; r < dj; ++r)
        for (int c = 0; c < dj; ++c)
            for (std::size_t p = 0; p < pre; ++p)
                for (std::size_t q = 0; q < post; ++q) {
                    std::size_t row = (p * dj + r) * post + q;
                    std::size_t col = (p * dj + c) * post + q;
                    out(r, c) += op(row, col);
                }
    return out;
}

Matrix gram_on_side(const Tensor& phi, std::uint32_t mask, double norm_sq) {
    Matrix f = flatten_mask(phi, mask);
    Matrix g = f * f.adjoint() / norm_sq;
    return (g + g.adjoint().eval()) / 2.0;
}

}  // namespace

std::vector<Matrix> entropy_gradient(const Tensor& phi, const BipartitionDistribution& theta,
                                     double* weighted_entropy_out) {
    int k = phi.order();
    double ns = phi.norm_sq();
    std::vector<Matrix> grad(k);
    for (int j = 0; j < k; ++j) grad[j] = Matrix::Zero(phi.dim(j), phi.dim(j));

    std::vector<Matrix> rho_leg(k);
    for (int j = 0; j < k; ++j) rho_leg[j] = gram_on_side(phi, 1u << j, ns);

    double total_h = 0.0;
    for (const auto& [b, w] : theta.weights()) {
        for (std::uint32_t mask : {b.side(), b.complement()}) {
            Matrix rho = gram_on_side(phi, mask, ns);
            Matrix rlr = rho_log_rho(rho);
            double hb = -rlr.trace().real();
            if (mask == b.side()) total_h += w * hb;
            for (int j = 0; j < k; ++j) {
                if (!((mask >> j) & 1u)) continue;
                Matrix kj = partial_trace_to_leg(rlr, phi, mask, j);
                grad[j] -= 2.0 * w * (kj + hb * rho_leg[j]);
            }
        }
    }
    if (weighted_entropy_out) *weighted_entropy_out = total_h;
    return grad;
}

ScalingReport lower_local(const Tensor& t, const BipartitionDistribution& theta,
                          const LowerOptions& opts) {
    if (t.is_zero()) throw std::invalid_argument("lower_local: nonzero tensor required");
    if (theta.k() != t.order())
        throw std::invalid_argument("lower_local: party count mismatch");
    int k = t.order();
    double tnorm = t.norm();

    auto run = [&](std::vector<Matrix> maps) {
        ScalingReport rep;
        rep.status = ScalingStatus::max_iters;
        double eta = 0.5;
        Tensor phi = apply_local_maps(t, maps);
        double h = 0.0;
        int it = 0;
        for (; it < opts.max_iters; ++it) {
            double nrm = phi.norm();
            if (nrm < 1e-300) {
                rep.status = ScalingStatus::collapsed;
                break;
            }
            auto grads = entropy_gradient(phi, theta, &h);
            double gsq = 0.0;
            for (const auto& g : grads) gsq += g.squaredNorm();
            if (std::sqrt(gsq) < opts.grad_tol) {
                rep.status = ScalingStatus::converged;
                break;
            }
            // Armijo backtracking on the multiplicative update exp(eta*grad)
            bool accepted = false;
            double try_eta = std::min(eta * 2.0, 4.0);
            while (try_eta > 1e-14) {
                std::vector<Matrix> cand(k);
                for (int j = 0; j < k; ++j) {
                    cand[j] = hermitian_exp(try_eta * grads[j]) * maps[j];
                    cand[j] /= cand[j].norm();
                }
                Tensor phi2 = apply_local_maps(t, cand);
                if (phi2.norm() < 1e-12 * tnorm) {
                    rep.status = ScalingStatus::collapsed;
                    maps = std::move(cand);
                    phi = std::move(phi2);
                    accepted = true;
                    break;
                }
                double h2 = weighted_entropy(phi2, theta);
                if (h2 >= h + 1e-4 * try_eta * gsq) {
                    maps = std::move(cand);
                    phi = std::move(phi2);
                    eta = try_eta;
                    accepted = true;
                    break;
                }
                try_eta /= 2.0;
            }
            if (!accepted) break;  // flat to machine precision
            if (rep.status == ScalingStatus::collapsed) break;
        }
        rep.achieved_entropy = weighted_entropy(phi, theta);
        rep.final_maps = std::move(maps);
        rep.iterations = it;
        rep.moment_residual = moment_map(phi).residual;
        return rep;
    };

    std::vector<Matrix> identity(k);
    for (int j = 0; j < k; ++j) identity[j] = Matrix::Identity(t.dim(j), t.dim(j));
    ScalingReport best = run(identity);

    for (int r = 1; r <= opts.restarts; ++r) {
        std::vector<Matrix> maps(k);
        for (int j = 0; j < k; ++j) {
            std::mt19937_64 rng(opts.seed + 1000003ull * r + 7919ull * j);
            int d = t.dim(j);
            Matrix h = Matrix::Zero(d, d);
            for (int a = 0; a < d; ++a) {
                h(a, a) = opts.restart_sigma * standard_normal(rng);
                for (int b = a + 1; b < d; ++b) {
                    cplx z(standard_normal(rng), standard_normal(rng));
                    h(a, b) = opts.restart_sigma * z / std::sqrt(2.0);
                    h(b, a) = std::conj(h(a, b));
                }
            }
            maps[j] = hermitian_exp(h);
        }
        ScalingReport rep = run(std::move(maps));
        if (rep.achieved_entropy > best.achieved_entropy) best = std::move(rep);
    }
    return best;
}

// ---- moment map and capacity ----

MomentMapResult moment_map(const Tensor& t) {
    if (t.is_zero()) throw std::invalid_argument("moment_map: nonzero tensor required");
    double ns = t.norm_sq();
    MomentMapResult out;
    double acc = 0.0;
    for (int j = 0; j < t.order(); ++j) {
        Matrix mu = gram_on_side(t, 1u << j, ns);
        mu -= Matrix::Identity(t.dim(j), t.dim(j)) / static_cast<double>(t.dim(j));
        acc += mu.squaredNorm();
        out.components.push_back(std::move(mu));
    }
    out.residual = std::sqrt(acc);
    return out;
}

CapacityReport capacity(const Tensor& t, const CapacityOptions& opts) {
    if (t.is_zero()) throw std::invalid_argument("capacity: nonzero tensor required");
    int k = t.order();
    double tnorm = t.norm();
    int dmax = 0;
    for (int j = 0; j < k; ++j) dmax = std::max(dmax, t.dim(j));
    double step0 = 1.0 / (2.0 * dmax);

    std::vector<Matrix> maps(k);
    for (int j = 0; j < k; ++j) maps[j] = Matrix::Identity(t.dim(j), t.dim(j));
    Tensor phi = t;

    // Fixed geodesic steps: near the minimum the norm decrease per step falls
    // below double resolution, so progress is tracked on the moment residual
    // instead of an Armijo test on the norm. The step is halved whenever a
    // step would double the residual.
    CapacityReport rep;
    double eta = step0;
    int it = 0;
    MomentMapResult mu = moment_map(phi);
    for (; it < opts.max_iters; ++it) {
        double nrm = phi.norm();
        if (nrm < opts.collapse_floor * tnorm) {
            rep.capacity = 0.0;
            rep.semistable = false;
            rep.converged = true;
            rep.moment_residual = mu.residual;
            rep.minimizing_maps = maps;
            rep.iterations = it;
            return rep;
        }
        if (mu.residual < opts.residual_tol) {
            rep.capacity = nrm;
            rep.semistable = true;
            rep.converged = true;
            rep.moment_residual = mu.residual;
            rep.minimizing_maps = maps;
            rep.iterations = it;
            return rep;
        }
        std::vector<Matrix> cand(k);
        for (int j = 0; j < k; ++j) cand[j] = hermitian_exp(-eta * mu.components[j]) * maps[j];
        Tensor phi2 = apply_local_maps(t, cand);
        MomentMapResult mu2 = moment_map(phi2);
        if (mu2.residual > 2.0 * mu.residual && eta > step0 / 1024.0) {
            eta /= 2.0;
            continue;
        }
        maps = std::move(cand);
        phi = std::move(phi2);
        mu = std::move(mu2);
        eta = std::min(eta * 1.02, step0);
    }
    rep.capacity = phi.norm();
    rep.semistable = true;
    rep.converged = false;
    rep.moment_residual = mu.residual;
    rep.minimizing_maps = maps;
    rep.iterations = it;
    return rep;
}

double c_psi_given_capacity(const Tensor& t, const Bipartition& b, double cap) {
    Matrix f = flatten(t, b);
    if (f.rows() != f.cols())
        throw std::invalid_argument("c_psi: bipartition sides must have equal total dimension");
    if (cap <= 0.0) throw std::domain_error("c_psi: unstable tensor (capacity 0)");
    double d = static_cast<double>(f.rows());
    double det2 = std::norm(f.determinant());
    return det2 / std::pow(cap, 2.0 * d);
}

double c_psi(const Tensor& t, const Bipartition& b, const CapacityOptions& opts) {
    CapacityReport rep = capacity(t, opts);
    if (!rep.semistable) throw std::domain_error("c_psi: unstable tensor (capacity 0)");
    return c_psi_given_capacity(t, b, rep.capacity);
}

// ---- constrained entropy maximum ----

EntropyMaxResult entropy_max_with_det(int k, double c) {
    if (k < 2) throw std::invalid_argument("entropy_max_with_det: need k >= 2");
    if (c < 0.0) throw std::domain_error("entropy_max_with_det: need c >= 0");
    EntropyMaxResult out;
    double uniform_product = std::pow(1.0 / k, k);
    if (c >= uniform_product) {
        out.value_bits = std::log2(static_cast<double>(k));
        out.maximizer.assign(k, 1.0 / k);
        out.gamma = 1.0 - 1.0 / k;
        return out;
    }
    if (c == 0.0) {
        out.value_bits = std::log2(static_cast<double>(k - 1));
        out.maximizer.assign(k - 1, 1.0 / (k - 1));
        out.maximizer.push_back(0.0);
        out.gamma = 1.0;
        return out;
    }
    // (gamma/(k-1))^{k-1} (1-gamma) is strictly decreasing on (1-1/k, 1)
    auto g = [k](double gamma) {
        return std::pow(gamma / (k - 1), k - 1) * (1.0 - gamma);
    };
    double lo = 1.0 - 1.0 / k, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (g(mid) > c ? lo : hi) = mid;
    }
    double gamma = 0.5 * (lo + hi);
    out.gamma = gamma;
    double tail = 1.0 - gamma;  // can underflow for extreme c; x log x -> 0
    out.value_bits = -gamma * std::log2(gamma / (k - 1)) -
                     (tail > 0.0 ? tail * std::log2(tail) : 0.0);
    out.maximizer.assign(k - 1, gamma / (k - 1));
    out.maximizer.push_back(tail);
    return out;
}

double entropy_max_with_det_oracle(int k, double c, int grid) {
    if (k < 2 || k > 4) throw std::invalid_argument("oracle: k must be in [2,4]");
    if (grid < 2 || grid > 200) throw std::invalid_argument("oracle: grid must be in [2,200]");
    auto product = [](const std::vector<double>& p) {
        double r = 1.0;
        for (double x : p) r *= x;
        return r;
    };
    double slack = 1.0 + 1e-12;
    std::vector<double> best;
    double best_h = -1.0;
    // grid the first k-2 coordinates; the final two are completed exactly
    // under the pair sum and the product bound (equalize, or take the
    // closer-to-equal root of the saturating quadratic)
    auto complete_pair = [&](std::vector<double>& p, double s, double rest) {
        double hi, lo2;
        if (rest <= 0.0 || (s * s / 4.0) * rest <= c * slack) {
            hi = lo2 = s / 2.0;
        } else {
            double rbound = c * slack / rest;
            double disc = std::sqrt(std::max(0.0, s * s - 4.0 * rbound));
            hi = (s + disc) / 2.0;
            lo2 = (s - disc) / 2.0;
        }
        p[k - 2] = hi;
        p[k - 1] = lo2;
        if (product(p) > c * slack * (1.0 + 1e-12)) return;
        double h = entropy_bits(p);
        if (h > best_h) {
            best_h = h;
            best = p;
        }
    };
    std::vector<double> p(k, 0.0);
    auto rec = [&](auto&& self, int idx, double sum, double rest) -> void {
        if (idx == k - 2) {
            complete_pair(p, 1.0 - sum, rest);
            return;
        }
        for (int v = 0; v <= grid; ++v) {
            double x = static_cast<double>(v) / grid;
            if (sum + x > 1.0 + 1e-12) break;
            p[idx] = x;
            self(self, idx + 1, sum + x, rest * x);
        }
    };
    rec(rec, 0, 0.0, 1.0);
    if (best.empty()) return 0.0;

    // local polish: pattern search on the simplex with shrinking step. The
    // first k-1 coordinates move on a local lattice, the last takes the
    // remainder; infeasible and negative candidates are discarded.
    double step = 0.5 / grid;
    while (step > 1e-12) {
        bool improved = false;
        std::vector<int> off(k - 1, -2);
        while (true) {
            std::vector<double> q(k);
            double sum = 0.0;
            bool valid = true;
            for (int i = 0; i < k - 1; ++i) {
                q[i] = best[i] + off[i] * step;
                if (q[i] < 0.0) valid = false;
                sum += q[i];
            }
            q[k - 1] = 1.0 - sum;
            if (q[k - 1] < 0.0) valid = false;
            if (valid && product(q) <= c * slack) {
                double h = entropy_bits(q);
                if (h > best_h + 1e-15) {
                    best_h = h;
                    best = q;
                    improved = true;
                }
            }
            int a = 0;
            while (a < k - 1 && ++off[a] > 2) off[a++] = -2;
            if (a == k - 1) break;
        }
        if (!improved) step /= 2.0;
    }
    return best_h;
}

double det_bound(const Tensor& t, const Bipartition& b, const CapacityOptions& opts) {
    Matrix f = flatten(t, b);
    if (f.rows() != f.cols())
        throw std::invalid_argument("det_bound: bipartition sides must have equal total dimension");
    double c = c_psi(t, b, opts);
    return entropy_max_with_det(static_cast<int>(f.rows()), c).value_bits;
}

}  // namespace tqf
