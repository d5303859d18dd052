#include <cstdlib>
#include <vector>

#include "doctest.h"

#include "afcfit/kern.hpp"
#include "afcfit/rng.hpp"

using namespace afcfit;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t stream) {
    CounterRng rng(7, stream);
    std::vector<double> v(n);
    for (auto& x : v) x = 2.0 * rng.next_unit() - 1.0;
    return v;
}

}  // namespace

#if defined(AFCFIT_HAVE_AVX2)

// The AVX2 variants must match the scalar references bit-for-bit: elementwise
// ops use the same fused operations, reductions the same 4-lane tree.
TEST_CASE("kern: scalar and avx2 variants are bit-identical") {
    if (kern::active() != kern::Backend::avx2) {
        MESSAGE("host has no avx2; skipping equivalence checks");
        return;
    }
    for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 20u, 33u, 100u, 129u}) {
        const auto a = random_vec(n, n);
        const auto b = random_vec(n, 1000 + n);

        CHECK(kern::scalar::sum(a.data(), n) == kern::avx2::sum(a.data(), n));
        CHECK(kern::scalar::dot(a.data(), b.data(), n) == kern::avx2::dot(a.data(), b.data(), n));

        auto s1 = a;
        auto s2 = a;
        kern::scalar::scale(s1.data(), 0.3714, n);
        kern::avx2::scale(s2.data(), 0.3714, n);
        CHECK(s1 == s2);

        const std::size_t rows = (n % 5) + 2;
        const auto col = random_vec(rows, 2000 + n);
        auto acc1 = random_vec(rows * n, 3000 + n);
        auto acc2 = acc1;
        kern::scalar::outer_acc(acc1.data(), col.data(), rows, b.data(), n);
        kern::avx2::outer_acc(acc2.data(), col.data(), rows, b.data(), n);
        CHECK(acc1 == acc2);
    }
}

#endif  // AFCFIT_HAVE_AVX2

TEST_CASE("kern: striped sum matches plain accumulation closely") {
    const auto v = random_vec(1003, 42);
    double plain = 0.0;
    for (double x : v) plain += x;
    CHECK(kern::sum(v.data(), v.size()) == doctest::Approx(plain).epsilon(1e-12));
}

TEST_CASE("kern: outer_acc computes the outer product") {
    const std::vector<double> col = {2.0, -1.0};
    const std::vector<double> row = {1.0, 0.5, 3.0};
    std::vector<double> acc(6, 1.0);
    kern::outer_acc(acc.data(), col.data(), 2, row.data(), 3);
    CHECK(acc[0] == doctest::Approx(1.0 + 2.0));
    CHECK(acc[1] == doctest::Approx(1.0 + 1.0));
    CHECK(acc[2] == doctest::Approx(1.0 + 6.0));
    CHECK(acc[3] == doctest::Approx(1.0 - 1.0));
    CHECK(acc[4] == doctest::Approx(1.0 - 0.5));
    CHECK(acc[5] == doctest::Approx(1.0 - 3.0));
}

TEST_CASE("kern: force_backend round-trips") {
    const auto original = kern::active();
    kern::force_backend(kern::Backend::scalar);
    CHECK(kern::active() == kern::Backend::scalar);
    kern::force_backend(original);
    CHECK(kern::active() == original);
}
