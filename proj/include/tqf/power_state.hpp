#pragma once

#include "tqf/partitions.hpp"
#include "tqf/tensor.hpp"

#include <cstdint>
#include <vector>

namespace tqf {

/// n-th Kronecker power of a k-tensor, stored over n*k axes in copy-major
/// order: copy 0's k legs, then copy 1's, and so on.
class PowerState {
public:
    PowerState(std::vector<int> base_shape, int n, std::vector<cplx> entries);

    /// psi^{(X) n}. Guarded: refuses more than `max_entries` entries.
    static PowerState kron_power(const Tensor& t, int n,
                                 std::size_t max_entries = std::size_t{1} << 26);

    const std::vector<int>& base_shape() const { return base_shape_; }
    int k() const { return static_cast<int>(base_shape_.size()); }
    int n() const { return n_; }
    std::size_t size() const { return data_.size(); }
    const std::vector<cplx>& data() const { return data_; }
    std::vector<cplx>& data() { return data_; }

    /// True while the entries are known to equal psi^{(X)n} for the tensor
    /// the state was built from; cleared by any projector or permutation.
    bool is_tracked_power() const { return tracked_power_; }
    void mark_transformed() { tracked_power_ = false; }

    double norm_sq() const;
    double norm() const;

    /// Stride of axis (copy c, party j) in the row-major layout.
    std::size_t stride(int copy, int party) const;

private:
    std::vector<int> base_shape_;
    int n_;
    std::vector<cplx> data_;
    bool tracked_power_ = false;
};

/// Copy-permutation action tau_S(pi) restricted to the legs of the parties in
/// party_mask; legs outside are untouched.
PowerState permute_copies(const PowerState& x, const std::vector<int>& pi,
                          std::uint32_t party_mask);

/// Isotypic projector P_lambda on the parties in party_mask:
/// (dim[lambda]/n!) sum_pi chi_lambda(pi) tau_S(pi).
PowerState apply_isotypic(const PowerState& x, const Partition& lambda,
                          std::uint32_t party_mask);

/// P_lambda^{V_b} = P_lambda^{V_S} P_(n)^{V_[k]}: symmetrize over all legs,
/// then isotypic on the canonical side of b.
PowerState apply_bipartition_projector(const PowerState& x, const Partition& lambda,
                                       const Bipartition& b);

/// Ordered product of bipartition projectors, applied right-to-left as
/// written (the last step in the list acts first).
PowerState apply_ordered_product(const PowerState& x,
                                 const std::vector<std::pair<Bipartition, Partition>>& steps);

/// Reference evaluation of P_lambda^{V_b} by the double sum
/// (dim[lambda]/(n!)^2) sum_{pi,sigma} chi_lambda(pi) tau_S(pi sigma) (x) tau_Sbar(sigma).
/// Kept for cross-validation; cost (n!)^2.
PowerState apply_bipartition_projector_double_sum(const PowerState& x, const Partition& lambda,
                                                  const Bipartition& b);

/// Numerical surrogate for "!= 0": ||x|| / ref_norm > eps.
bool is_nonvanishing(const PowerState& x, double ref_norm, double eps = 1e-8);

}  // namespace tqf
