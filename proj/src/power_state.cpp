#include "tqf/power_state.hpp"

#include "tqf/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace tqf {

namespace {

long long factorial(int n) {
    long long f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

std::vector<int> invert(const std::vector<int>& perm) {
    std::vector<int> inv(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = static_cast<int>(i);
    return inv;
}

// permutations(n) paired with the index of each permutation's conjugacy class
struct PermTable {
    std::vector<std::vector<int>> classes;  // cycle types, aligned with conjugacy_classes(n)
    std::vector<int> class_of;              // per permutation (lex order)
};

const PermTable& perm_table(int n) {
    static std::mutex mutex;
    static std::map<int, PermTable> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    PermTable t;
    for (const auto& c : conjugacy_classes(n)) t.classes.push_back(c.parts);
    const auto& perms = permutations(n);
    t.class_of.reserve(perms.size());
    for (const auto& p : perms) {
        auto type = cycle_type_of(p);
        auto pos = std::find(t.classes.begin(), t.classes.end(), type);
        t.class_of.push_back(static_cast<int>(pos - t.classes.begin()));
    }
    return cache.emplace(n, std::move(t)).first->second;
}

}  // namespace

PowerState::PowerState(std::vector<int> base_shape, int n, std::vector<cplx> entries)
    : base_shape_(std::move(base_shape)), n_(n), data_(std::move(entries)) {
    if (n_ < 1) throw std::invalid_argument("power state: n must be >= 1");
    std::size_t d = 1;
    for (int x : base_shape_) d *= static_cast<std::size_t>(x);
    std::size_t expect = 1;
    for (int c = 0; c < n_; ++c) expect *= d;
    if (expect != data_.size())
        throw std::invalid_argument("power state: entry count does not match shape");
}

PowerState PowerState::kron_power(const Tensor& t, int n, std::size_t max_entries) {
    std::size_t d = t.size();
    std::size_t total = 1;
    for (int c = 0; c < n; ++c) {
        if (total > max_entries / d)
            throw std::invalid_argument("kron_power: state would exceed the entry cap");
        total *= d;
    }
    std::vector<cplx> data(t.data());
    std::size_t cur = d;
    for (int c = 1; c < n; ++c) {
        std::vector<cplx> next(cur * d);
        for (std::size_t j = 0; j < cur; ++j)
            for (std::size_t i = 0; i < d; ++i) next[j * d + i] = data[j] * t.data()[i];
        data = std::move(next);
        cur *= d;
    }
    PowerState out(t.shape(), n, std::move(data));
    out.tracked_power_ = true;
    return out;
}

std::size_t PowerState::stride(int copy, int party) const {
    std::size_t s = 1;
    for (int j = k() - 1; j > party; --j) s *= static_cast<std::size_t>(base_shape_[j]);
    std::size_t d = 1;
    for (int x : base_shape_) d *= static_cast<std::size_t>(x);
    for (int c = n_ - 1; c > copy; --c) s *= d;
    return s;
}

double PowerState::norm_sq() const { return kernels::norm_sq(data_.data(), data_.size()); }
double PowerState::norm() const { return std::sqrt(norm_sq()); }

namespace {

// Per-axis strides realizing out[M] = in[M'] with M'[(c,j)] = M[(w_j(c), j)],
// where w_j is the copy-permutation acting on leg j.
std::vector<std::size_t> restrides(const PowerState& x,
                                   const std::vector<const std::vector<int>*>& inv_per_leg) {
    int n = x.n(), k = x.k();
    std::vector<std::size_t> s(static_cast<std::size_t>(n) * k);
    for (int c = 0; c < n; ++c)
        for (int j = 0; j < k; ++j) {
            int src_copy = inv_per_leg[j] ? (*inv_per_leg[j])[c] : c;
            s[static_cast<std::size_t>(c) * k + j] = x.stride(src_copy, j);
        }
    return s;
}

std::vector<int> axis_dims(const PowerState& x) {
    std::vector<int> dims(static_cast<std::size_t>(x.n()) * x.k());
    for (int c = 0; c < x.n(); ++c)
        for (int j = 0; j < x.k(); ++j) dims[static_cast<std::size_t>(c) * x.k() + j] = x.base_shape()[j];
    return dims;
}

}  // namespace

PowerState permute_copies(const PowerState& x, const std::vector<int>& pi,
                          std::uint32_t party_mask) {
    if (static_cast<int>(pi.size()) != x.n())
        throw std::invalid_argument("permute_copies: permutation size != n");
    auto inv = invert(pi);
    std::vector<const std::vector<int>*> per_leg(x.k(), nullptr);
    for (int j = 0; j < x.k(); ++j)
        if ((party_mask >> j) & 1u) per_leg[j] = &inv;
    auto dims = axis_dims(x);
    auto strides = restrides(x, per_leg);
    PowerState out(x.base_shape(), x.n(), std::vector<cplx>(x.size()));
    kernels::restride_copy(x.data().data(), out.data().data(), dims.data(), strides.data(),
                           static_cast<int>(dims.size()), x.size());
    return out;
}

PowerState apply_isotypic(const PowerState& x, const Partition& lambda,
                          std::uint32_t party_mask) {
    int n = x.n();
    if (lambda.n() != n) throw std::invalid_argument("apply_isotypic: |lambda| != n");
    const auto& perms = permutations(n);
    const auto& table = perm_table(n);
    std::vector<double> class_coeff(table.classes.size());
    for (std::size_t ci = 0; ci < table.classes.size(); ++ci)
        class_coeff[ci] = static_cast<double>(character(lambda, CycleType(table.classes[ci])));

    auto dims = axis_dims(x);
    PowerState out(x.base_shape(), n, std::vector<cplx>(x.size(), cplx(0, 0)));
    std::vector<const std::vector<int>*> per_leg(x.k(), nullptr);
    for (std::size_t pi = 0; pi < perms.size(); ++pi) {
        double coeff = class_coeff[table.class_of[pi]];
        if (coeff == 0.0) continue;
        auto inv = invert(perms[pi]);
        for (int j = 0; j < x.k(); ++j)
            per_leg[j] = ((party_mask >> j) & 1u) ? &inv : nullptr;
        auto strides = restrides(x, per_leg);
        kernels::restride_axpy(x.data().data(), out.data().data(), coeff, dims.data(),
                               strides.data(), static_cast<int>(dims.size()), x.size());
    }
    double scale = static_cast<double>(irrep_dimension(lambda)) / static_cast<double>(factorial(n));
    kernels::scale(out.data().data(), scale, out.size());
    return out;
}

PowerState apply_bipartition_projector(const PowerState& x, const Partition& lambda,
                                       const Bipartition& b) {
    if (b.k() != x.k())
        throw std::invalid_argument("apply_bipartition_projector: party count mismatch");
    PowerState sym = apply_isotypic(x, Partition(std::vector<int>{x.n()}), b.full_mask());
    return apply_isotypic(sym, lambda, b.side());
}

PowerState apply_ordered_product(const PowerState& x,
                                 const std::vector<std::pair<Bipartition, Partition>>& steps) {
    PowerState cur = x;
    for (auto it = steps.rbegin(); it != steps.rend(); ++it)
        cur = apply_bipartition_projector(cur, it->second, it->first);
    return cur;
}

PowerState apply_bipartition_projector_double_sum(const PowerState& x, const Partition& lambda,
                                                  const Bipartition& b) {
    int n = x.n();
    if (lambda.n() != n) throw std::invalid_argument("double_sum: |lambda| != n");
    const auto& perms = permutations(n);
    const auto& table = perm_table(n);
    std::vector<double> class_coeff(table.classes.size());
    for (std::size_t ci = 0; ci < table.classes.size(); ++ci)
        class_coeff[ci] = static_cast<double>(character(lambda, CycleType(table.classes[ci])));

    auto dims = axis_dims(x);
    PowerState out(x.base_shape(), n, std::vector<cplx>(x.size(), cplx(0, 0)));
    std::vector<int> comp(n);
    for (std::size_t pi = 0; pi < perms.size(); ++pi) {
        double coeff = class_coeff[table.class_of[pi]];
        if (coeff == 0.0) continue;
        for (const auto& sigma : perms) {
            for (int i = 0; i < n; ++i) comp[i] = perms[pi][sigma[i]];  // pi o sigma
            auto inv_comp = invert(comp);
            auto inv_sigma = invert(sigma);
            std::vector<const std::vector<int>*> per_leg(x.k(), nullptr);
            for (int j = 0; j < x.k(); ++j)
                per_leg[j] = ((b.side() >> j) & 1u) ? &inv_comp : &inv_sigma;
            auto strides = restrides(x, per_leg);
            kernels::restride_axpy(x.data().data(), out.data().data(), coeff, dims.data(),
                                   strides.data(), static_cast<int>(dims.size()), x.size());
        }
    }
    double f = static_cast<double>(factorial(n));
    kernels::scale(out.data().data(), static_cast<double>(irrep_dimension(lambda)) / (f * f),
                   out.size());
    return out;
}

bool is_nonvanishing(const PowerState& x, double ref_norm, double eps) {
    if (ref_norm <= 0.0) throw std::invalid_argument("is_nonvanishing: ref_norm must be positive");
    return x.norm() / ref_norm > eps;
}

}  // namespace tqf
