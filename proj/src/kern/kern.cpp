#include "afcfit/kern.hpp"

#include <cstdlib>
#include <cstring>

#include "afcfit/common.hpp"

namespace afcfit::kern {

namespace {

bool avx2_available() {
#if defined(AFCFIT_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend select_backend() {
    if (const char* env = std::getenv("AFCFIT_SIMD")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
        if (std::strcmp(env, "avx2") == 0) {
            if (!avx2_available()) {
                throw ConfigError("AFCFIT_SIMD=avx2 requested but this CPU/build lacks avx2+fma");
            }
            return Backend::avx2;
        }
        throw ConfigError(cat("unknown AFCFIT_SIMD value '", env, "' (expected scalar or avx2)"));
    }
    return avx2_available() ? Backend::avx2 : Backend::scalar;
}

Backend& current() {
    static Backend backend = select_backend();
    return backend;
}

}  // namespace

Backend active() { return current(); }

const char* backend_name(Backend backend) {
    return backend == Backend::avx2 ? "avx2" : "scalar";
}

void force_backend(Backend backend) {
    if (backend == Backend::avx2 && !avx2_available()) {
        throw ConfigError("avx2 backend unavailable on this host");
    }
    current() = backend;
}

void outer_acc(double* acc, const double* col, std::size_t rows, const double* row,
               std::size_t cols) {
#if defined(AFCFIT_HAVE_AVX2)
    if (current() == Backend::avx2) {
        avx2::outer_acc(acc, col, rows, row, cols);
        return;
    }
#endif
    scalar::outer_acc(acc, col, rows, row, cols);
}

double sum(const double* v, std::size_t n) {
#if defined(AFCFIT_HAVE_AVX2)
    if (current() == Backend::avx2) return avx2::sum(v, n);
#endif
    return scalar::sum(v, n);
}

double dot(const double* a, const double* b, std::size_t n) {
#if defined(AFCFIT_HAVE_AVX2)
    if (current() == Backend::avx2) return avx2::dot(a, b, n);
#endif
    return scalar::dot(a, b, n);
}

void scale(double* v, double s, std::size_t n) {
#if defined(AFCFIT_HAVE_AVX2)
    if (current() == Backend::avx2) {
        avx2::scale(v, s, n);
        return;
    }
#endif
    scalar::scale(v, s, n);
}

}  // namespace afcfit::kern
