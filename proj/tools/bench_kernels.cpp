// Compares the serial reference kernels against the OpenMP paths on the
// projector workload (n = 4 copies of a 2x2x2x2 tensor) and checks that both
// produce bitwise-identical results.

#include "tqf/corpus.hpp"
#include "tqf/kernels.hpp"
#include "tqf/partitions.hpp"
#include "tqf/power_state.hpp"
#include "tqf/tensor.hpp"

#include <chrono>
#include <cstring>
#include <iostream>
#include <vector>

using namespace tqf;

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

std::vector<std::size_t> strides_for(const PowerState& x, const std::vector<int>& perm,
                                     std::uint32_t mask) {
    std::vector<int> inv(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = static_cast<int>(i);
    std::vector<std::size_t> s(static_cast<std::size_t>(x.n()) * x.k());
    for (int c = 0; c < x.n(); ++c)
        for (int j = 0; j < x.k(); ++j)
            s[static_cast<std::size_t>(c) * x.k() + j] =
                x.stride(((mask >> j) & 1u) ? inv[c] : c, j);
    return s;
}

}  // namespace

int main() {
    const int n = 4;
    Tensor t = random_gaussian_tensor({2, 2, 2, 2}, 7);
    PowerState x = PowerState::kron_power(t, n);
    std::vector<int> dims(static_cast<std::size_t>(n) * 4, 2);

    const auto& perms = permutations(n);
    const int reps = 20;

    std::vector<cplx> acc_serial(x.size(), cplx(0, 0)), acc_parallel(x.size(), cplx(0, 0));

    auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r)
        for (const auto& p : perms) {
            auto s = strides_for(x, p, 0x3);
            kernels::restride_axpy_serial(x.data().data(), acc_serial.data(), 1.0, dims.data(),
                                          s.data(), static_cast<int>(dims.size()), x.size());
        }
    double serial_ms = ms_since(t0);

    t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r)
        for (const auto& p : perms) {
            auto s = strides_for(x, p, 0x3);
            kernels::restride_axpy(x.data().data(), acc_parallel.data(), 1.0, dims.data(),
                                   s.data(), static_cast<int>(dims.size()), x.size());
        }
    double parallel_ms = ms_since(t0);

    bool identical = std::memcmp(acc_serial.data(), acc_parallel.data(),
                                 acc_serial.size() * sizeof(cplx)) == 0;

    double ns1 = kernels::norm_sq_serial(acc_serial.data(), acc_serial.size());
    double ns2 = kernels::norm_sq(acc_parallel.data(), acc_parallel.size());

    std::cout << "threads:        " << kernels::max_threads() << "\n"
              << "class-sum axpy: serial " << serial_ms << " ms, parallel " << parallel_ms
              << " ms, speedup " << serial_ms / parallel_ms << "x\n"
              << "bitwise equal:  " << (identical ? "yes" : "NO") << "\n"
              << "norm_sq equal:  " << (ns1 == ns2 ? "yes" : "NO") << "\n";

    // end-to-end: one bipartition projector application on the power state
    t0 = std::chrono::steady_clock::now();
    PowerState proj = apply_bipartition_projector(x, Partition({2, 2}),
                                                  Bipartition::from_string("AB", 4));
    std::cout << "P_(2,2)^{AB|CD} on psi^x4: " << ms_since(t0) << " ms, norm "
              << proj.norm() << "\n";
    return identical && ns1 == ns2 ? 0 : 1;
}
