#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace tqf::kernels {

using cplx = std::complex<double>;

/// Cap on OpenMP worker threads (also set from the TQF_THREADS env var).
void set_max_threads(int n);
int max_threads();

/// acc[i] += coeff * in[g(i)], where g re-reads entry i through the supplied
/// per-axis strides: decode i row-major over dims, then dot with in_strides.
/// Results are identical for the serial and parallel paths: each output entry
/// is accumulated independently, so thread count cannot change the result.
void restride_axpy_serial(const cplx* in, cplx* acc, double coeff,
                          const int* dims, const std::size_t* in_strides,
                          int naxes, std::size_t total);
void restride_axpy(const cplx* in, cplx* acc, double coeff,
                   const int* dims, const std::size_t* in_strides,
                   int naxes, std::size_t total);

/// out[i] = in[g(i)] with the same re-striding convention.
void restride_copy(const cplx* in, cplx* out,
                   const int* dims, const std::size_t* in_strides,
                   int naxes, std::size_t total);

void scale(cplx* data, double s, std::size_t total);

/// Squared 2-norm with a fixed-block reduction; deterministic for any
/// thread count.
double norm_sq_serial(const cplx* data, std::size_t total);
double norm_sq(const cplx* data, std::size_t total);

}  // namespace tqf::kernels
