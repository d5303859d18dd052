#include "afcfit/kern.hpp"

#if defined(AFCFIT_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>
#include <cstddef>

namespace afcfit::kern::avx2 {

void outer_acc(double* acc, const double* col, std::size_t rows, const double* row,
               std::size_t cols) {
    const std::size_t q = cols & ~std::size_t{3};
    for (std::size_t r = 0; r < rows; ++r) {
        const __m256d a = _mm256_set1_pd(col[r]);
        double* out = acc + r * cols;
        for (std::size_t c = 0; c < q; c += 4) {
            const __m256d w = _mm256_loadu_pd(row + c);
            const __m256d o = _mm256_loadu_pd(out + c);
            _mm256_storeu_pd(out + c, _mm256_fmadd_pd(a, w, o));
        }
        const double as = col[r];
        for (std::size_t c = q; c < cols; ++c) {
            out[c] = std::fma(as, row[c], out[c]);
        }
    }
}

double sum(const double* v, std::size_t n) {
    __m256d vacc = _mm256_setzero_pd();
    const std::size_t q = n & ~std::size_t{3};
    for (std::size_t i = 0; i < q; i += 4) {
        vacc = _mm256_add_pd(vacc, _mm256_loadu_pd(v + i));
    }
    alignas(32) double lane[4];
    _mm256_store_pd(lane, vacc);
    for (std::size_t i = q; i < n; ++i) {
        lane[i - q] += v[i];
    }
    return (lane[0] + lane[2]) + (lane[1] + lane[3]);
}

double dot(const double* a, const double* b, std::size_t n) {
    __m256d vacc = _mm256_setzero_pd();
    const std::size_t q = n & ~std::size_t{3};
    for (std::size_t i = 0; i < q; i += 4) {
        vacc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), vacc);
    }
    alignas(32) double lane[4];
    _mm256_store_pd(lane, vacc);
    for (std::size_t i = q; i < n; ++i) {
        lane[i - q] = std::fma(a[i], b[i], lane[i - q]);
    }
    return (lane[0] + lane[2]) + (lane[1] + lane[3]);
}

void scale(double* v, double s, std::size_t n) {
    const __m256d vs = _mm256_set1_pd(s);
    const std::size_t q = n & ~std::size_t{3};
    for (std::size_t i = 0; i < q; i += 4) {
        _mm256_storeu_pd(v + i, _mm256_mul_pd(_mm256_loadu_pd(v + i), vs));
    }
    for (std::size_t i = q; i < n; ++i) {
        v[i] *= s;
    }
}

}  // namespace afcfit::kern::avx2

#endif  // AFCFIT_HAVE_AVX2
