#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tqf {

/// Integer partition with parts sorted descending.
struct Partition {
    std::vector<int> parts;

    Partition() = default;
    explicit Partition(std::vector<int> p);

    int n() const;
    int rows() const { return static_cast<int>(parts.size()); }
    int part(int i) const { return i < rows() ? parts[i] : 0; }

    bool operator==(const Partition& o) const { return parts == o.parts; }
    bool operator!=(const Partition& o) const { return parts != o.parts; }
    bool operator<(const Partition& o) const { return parts < o.parts; }

    std::string to_string() const;
};

/// Conjugacy class of S_n, identified by its cycle type.
struct CycleType {
    std::vector<int> parts;   // cycle lengths, descending
    long long class_size = 0;

    explicit CycleType(std::vector<int> p);
    int n() const;
};

/// All partitions of n with at most max_rows rows, in reverse-lexicographic
/// order ((n) first, (1,...,1) last). max_rows <= 0 means unrestricted.
std::vector<Partition> enumerate_partitions(int n, int max_rows = 0);

/// All cycle types of S_n with their class sizes, in reverse-lex order.
std::vector<CycleType> conjugacy_classes(int n);

/// Exact character chi_lambda(c) via Murnaghan-Nakayama. Memoized.
long long character(const Partition& lambda, const CycleType& c);

/// dim[lambda] by the hook length formula.
long long irrep_dimension(const Partition& lambda);

/// Shannon entropy, in bits, of parts/n.
double diagram_entropy(const Partition& lambda);

/// Necessary condition for the Kronecker coefficient g_{nu,mu,lambda} to be
/// nonzero: nu_1 <= sum_i min(lambda_i, mu_i).
bool row_bound_check(const Partition& nu, const Partition& mu, const Partition& lambda);

/// All permutations of {0,..,n-1} in lexicographic one-line order.
const std::vector<std::vector<int>>& permutations(int n);

/// Cycle type of a permutation in one-line notation.
std::vector<int> cycle_type_of(const std::vector<int>& perm);

}  // namespace tqf
