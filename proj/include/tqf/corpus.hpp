#pragma once

#include "tqf/tensor.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tqf {

/// Rank-n unit k-tensor, sum_i e_i^{(x)k}.
Tensor unit_tensor(int n, int k);

/// Rank-2 unit tensor supported on the legs in `side_mask`; legs outside
/// carry e_1 on a one-dimensional space.
Tensor unit2_on_subset(std::uint32_t side_mask, int k);

/// W state, sum_i e_1^{(i-1)} (x) e_2 (x) e_1^{(k-i)}. Unnormalized (norm sqrt(k)).
Tensor w_state(int k);

/// The separation family S_p on four qubits; unit norm for p in [0,1].
Tensor s_p(double p);

/// Werner-state purification Q_gamma on four qubits, Bell pairs on (A,B)/(C,D).
Tensor q_gamma(double gamma);

/// AME core (1/3) sum e_l (x) e_l' (x) e_{l+l'} (x) e_{l+2l'} on four
/// dimension-3 legs, embedded with k-4 trivial legs.
Tensor ame_L(int k);

/// Determinant tensor, entries sgn(pi) at permutation indices. 2 <= k <= 6.
Tensor det_tensor(int k);

/// Place t's legs at the stated positions of a k-tensor, dimension-1 legs
/// carrying e_1 elsewhere. positions[i] is the (0-based) target of t's leg i.
Tensor embed(const Tensor& t, int k, const std::vector<int>& positions);

/// Standard embedding: legs 0..l-1 in order.
Tensor embed_standard(const Tensor& t, int k);

/// Resolve a CLI tensor name like "sp:p=0.333", "unit:n=2,k=4",
/// "qgamma:g=0.9", "w:k=4", "ameL:k=4", "det:k=3", "unit2S:S=AB,k=4".
Tensor named_tensor(const std::string& spec);

}  // namespace tqf
