#pragma once

#include <cstddef>

// Data-parallel inner kernels used by the density accumulator and the MLP.
// Every operation has a scalar reference implementation and, on x86-64, an
// AVX2+FMA variant selected at runtime. The two are bit-identical by
// construction: elementwise ops share the same fused operations, and
// reductions use the same 4-lane striped accumulation tree in both paths.
namespace afcfit::kern {

enum class Backend { scalar, avx2 };

// Backend chosen at first use: AVX2 when the CPU supports avx2+fma, unless
// the AFCFIT_SIMD environment variable ("scalar" or "avx2") overrides it.
Backend active();
const char* backend_name(Backend backend);

// Test hook. Throws ConfigError if the backend is unavailable on this host.
void force_backend(Backend backend);

// acc[r * cols + c] += col[r] * row[c]   (fused multiply-add per cell)
void outer_acc(double* acc, const double* col, std::size_t rows, const double* row,
               std::size_t cols);

// Striped 4-lane sum: lane l accumulates v[l], v[l+4], ...; combined as
// (l0 + l2) + (l1 + l3). Deterministic and identical across backends.
double sum(const double* v, std::size_t n);

// Striped 4-lane fused dot product, same reduction tree as sum().
double dot(const double* a, const double* b, std::size_t n);

// v[i] *= s
void scale(double* v, double s, std::size_t n);

namespace scalar {
void outer_acc(double* acc, const double* col, std::size_t rows, const double* row,
               std::size_t cols);
double sum(const double* v, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
void scale(double* v, double s, std::size_t n);
}  // namespace scalar

#if defined(AFCFIT_HAVE_AVX2)
namespace avx2 {
void outer_acc(double* acc, const double* col, std::size_t rows, const double* row,
               std::size_t cols);
double sum(const double* v, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
void scale(double* v, double s, std::size_t n);
}  // namespace avx2
#endif

}  // namespace afcfit::kern
