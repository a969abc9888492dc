#include "tqf/kernels.hpp"

#include <algorithm>
#include <atomic>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tqf::kernels {

namespace {

std::atomic<int> g_max_threads{0};  // 0 = library default

int effective_threads() {
#ifdef _OPENMP
    int n = omp_get_max_threads();
    int cap = g_max_threads.load();
    if (cap > 0) n = std::min(n, cap);
    return std::max(1, n);
#else
    return 1;
#endif
}

// Gather-accumulate over a contiguous index range using an odometer over the
// axis digits, so the inner loop is increment + one indexed read.
template <typename Op>
void restride_range(const cplx* in, cplx* out, double coeff,
                    const int* dims, const std::size_t* in_strides,
                    int naxes, std::size_t begin, std::size_t end, Op op) {
    if (begin >= end) return;
    std::vector<int> digit(naxes, 0);
    std::size_t src = 0;
    std::size_t rem = begin;
    for (int a = naxes - 1; a >= 0; --a) {
        digit[a] = static_cast<int>(rem % dims[a]);
        rem /= dims[a];
        src += static_cast<std::size_t>(digit[a]) * in_strides[a];
    }
    for (std::size_t i = begin; i < end; ++i) {
        op(out[i], coeff * in[src]);
        for (int a = naxes - 1; a >= 0; --a) {
            ++digit[a];
            src += in_strides[a];
            if (digit[a] < dims[a]) break;
            digit[a] = 0;
            src -= static_cast<std::size_t>(dims[a]) * in_strides[a];
        }
    }
}

constexpr std::size_t kParallelCutoff = 1u << 12;

}  // namespace

void set_max_threads(int n) { g_max_threads.store(n); }
int max_threads() { return effective_threads(); }

void restride_axpy_serial(const cplx* in, cplx* acc, double coeff,
                          const int* dims, const std::size_t* in_strides,
                          int naxes, std::size_t total) {
    restride_range(in, acc, coeff, dims, in_strides, naxes, 0, total,
                   [](cplx& o, cplx v) { o += v; });
}

void restride_axpy(const cplx* in, cplx* acc, double coeff,
                   const int* dims, const std::size_t* in_strides,
                   int naxes, std::size_t total) {
    int nt = effective_threads();
    if (nt <= 1 || total < kParallelCutoff) {
        restride_axpy_serial(in, acc, coeff, dims, in_strides, naxes, total);
        return;
    }
#ifdef _OPENMP
#pragma omp parallel num_threads(nt)
    {
        int tid = omp_get_thread_num();
        int nth = omp_get_num_threads();
        std::size_t chunk = (total + nth - 1) / nth;
        std::size_t begin = std::min(total, chunk * static_cast<std::size_t>(tid));
        std::size_t end = std::min(total, begin + chunk);
        restride_range(in, acc, coeff, dims, in_strides, naxes, begin, end,
                       [](cplx& o, cplx v) { o += v; });
    }
#else
    restride_axpy_serial(in, acc, coeff, dims, in_strides, naxes, total);
#endif
}

void restride_copy(const cplx* in, cplx* out,
                   const int* dims, const std::size_t* in_strides,
                   int naxes, std::size_t total) {
    int nt = effective_threads();
#ifdef _OPENMP
    if (nt > 1 && total >= kParallelCutoff) {
#pragma omp parallel num_threads(nt)
        {
            int tid = omp_get_thread_num();
            int nth = omp_get_num_threads();
            std::size_t chunk = (total + nth - 1) / nth;
            std::size_t begin = std::min(total, chunk * static_cast<std::size_t>(tid));
            std::size_t end = std::min(total, begin + chunk);
            restride_range(in, out, 1.0, dims, in_strides, naxes, begin, end,
                           [](cplx& o, cplx v) { o = v; });
        }
        return;
    }
#endif
    restride_range(in, out, 1.0, dims, in_strides, naxes, 0, total,
                   [](cplx& o, cplx v) { o = v; });
}

void scale(cplx* data, double s, std::size_t total) {
    int nt = effective_threads();
#ifdef _OPENMP
#pragma omp parallel for num_threads(nt) if (nt > 1 && total >= kParallelCutoff)
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(total); ++i) data[i] *= s;
}

namespace {
constexpr std::size_t kBlock = 4096;

double block_sum(const cplx* data, std::size_t begin, std::size_t end) {
    double s = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
        s += data[i].real() * data[i].real() + data[i].imag() * data[i].imag();
    }
    return s;
}
}  // namespace

double norm_sq_serial(const cplx* data, std::size_t total) {
    std::size_t nblocks = (total + kBlock - 1) / kBlock;
    double s = 0.0;
    for (std::size_t b = 0; b < nblocks; ++b)
        s += block_sum(data, b * kBlock, std::min(total, (b + 1) * kBlock));
    return s;
}

double norm_sq(const cplx* data, std::size_t total) {
    std::size_t nblocks = (total + kBlock - 1) / kBlock;
    if (nblocks <= 1) return block_sum(data, 0, total);
    std::vector<double> partial(nblocks);
    int nt = effective_threads();
#ifdef _OPENMP
#pragma omp parallel for num_threads(nt) if (nt > 1 && nblocks > 2)
#endif
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nblocks); ++b)
        partial[b] = block_sum(data, b * kBlock, std::min(total, (b + 1) * kBlock));
    // combine in fixed block order so the result is thread-count independent
    double s = 0.0;
    for (double p : partial) s += p;
    return s;
}

}  // namespace tqf::kernels
