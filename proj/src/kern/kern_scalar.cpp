#include <cmath>
#include <cstddef>

#include "afcfit/kern.hpp"

namespace afcfit::kern::scalar {

void outer_acc(double* acc, const double* col, std::size_t rows, const double* row,
               std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) {
        const double a = col[r];
        double* out = acc + r * cols;
        for (std::size_t c = 0; c < cols; ++c) {
            out[c] = std::fma(a, row[c], out[c]);
        }
    }
}

double sum(const double* v, std::size_t n) {
    double lane[4] = {0.0, 0.0, 0.0, 0.0};
    const std::size_t q = n & ~std::size_t{3};
    for (std::size_t i = 0; i < q; i += 4) {
        lane[0] += v[i];
        lane[1] += v[i + 1];
        lane[2] += v[i + 2];
        lane[3] += v[i + 3];
    }
    for (std::size_t i = q; i < n; ++i) {
        lane[i - q] += v[i];
    }
    return (lane[0] + lane[2]) + (lane[1] + lane[3]);
}

double dot(const double* a, const double* b, std::size_t n) {
    double lane[4] = {0.0, 0.0, 0.0, 0.0};
    const std::size_t q = n & ~std::size_t{3};
    for (std::size_t i = 0; i < q; i += 4) {
        lane[0] = std::fma(a[i], b[i], lane[0]);
        lane[1] = std::fma(a[i + 1], b[i + 1], lane[1]);
        lane[2] = std::fma(a[i + 2], b[i + 2], lane[2]);
        lane[3] = std::fma(a[i + 3], b[i + 3], lane[3]);
    }
    for (std::size_t i = q; i < n; ++i) {
        lane[i - q] = std::fma(a[i], b[i], lane[i - q]);
    }
    return (lane[0] + lane[2]) + (lane[1] + lane[3]);
}

void scale(double* v, double s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        v[i] *= s;
    }
}

}  // namespace afcfit::kern::scalar
