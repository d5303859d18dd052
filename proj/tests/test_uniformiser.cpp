#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"

#include "afcfit/common.hpp"
#include "afcfit/rng.hpp"
#include "afcfit/uniformiser.hpp"

using namespace afcfit;

namespace {

JudgementDataset dataset_from_pool(const std::vector<double>& pooled) {
    REQUIRE(pooled.size() % 2 == 0);
    std::vector<TripletRecord> records;
    for (std::size_t i = 0; i < pooled.size(); i += 2) {
        records.push_back({"p" + std::to_string(i), pooled[i], pooled[i + 1], 0, 1, std::nullopt});
    }
    return JudgementDataset::from_records(std::move(records));
}

}  // namespace

TEST_CASE("fit_uniformiser: hand-counted histogram CDF") {
    const auto ds = dataset_from_pool({1.0, 2.0, 3.0, 4.0});
    const auto map = fit_uniformiser(ds, 4);
    REQUIRE(map.bins == 4);
    const std::vector<double> expected_edges = {1.0, 1.75, 2.5, 3.25, 4.0};
    const std::vector<double> expected_cum = {0.0, 0.25, 0.5, 0.75, 1.0};
    for (int i = 0; i <= 4; ++i) {
        CHECK(map.bin_edges[i] == doctest::Approx(expected_edges[i]).epsilon(1e-15));
        CHECK(map.cum_mass[i] == doctest::Approx(expected_cum[i]).epsilon(1e-15));
    }
}

TEST_CASE("fit_uniformiser: CDF endpoints and monotonicity") {
    CounterRng rng(5, 0);
    std::vector<double> pool(2000);
    for (auto& v : pool) v = rng.next_unit() * 7.0 + 0.5;
    const auto map = fit_uniformiser(dataset_from_pool(pool), 50);
    CHECK(map.cum_mass.front() == 0.0);
    CHECK(map.cum_mass.back() == 1.0);
    CHECK(std::is_sorted(map.cum_mass.begin(), map.cum_mass.end()));
    CHECK(std::is_sorted(map.bin_edges.begin(), map.bin_edges.end()));
}

TEST_CASE("fit_uniformiser: two distinct values repeated equally") {
    // Empirical-CDF oracle: half the pooled mass sits at each value, so the
    // midpoint between the values maps to 0.5.
    std::vector<double> pool;
    for (int i = 0; i < 100; ++i) {
        pool.push_back(2.0);
        pool.push_back(6.0);
    }
    const auto map = fit_uniformiser(dataset_from_pool(pool), 8);
    CHECK(apply_uniformiser(map, 4.0) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("fit_uniformiser: degenerate distribution") {
    CHECK_THROWS_AS(fit_uniformiser(dataset_from_pool({3.0, 3.0, 3.0, 3.0}), 4),
                    ValidationError);
}

TEST_CASE("fit_uniformiser: preconditions") {
    std::vector<TripletRecord> one = {{"a", 0.1, 0.2, 0, 1, std::nullopt}};
    CHECK_THROWS_AS(fit_uniformiser(JudgementDataset::from_records(one), 10), ConfigError);
    CHECK_THROWS_AS(fit_uniformiser(dataset_from_pool({1.0, 2.0, 3.0, 4.0}), 1), ConfigError);
}

TEST_CASE("apply_uniformiser: endpoints, clamping, interpolation") {
    const auto map = fit_uniformiser(dataset_from_pool({1.0, 2.0, 3.0, 4.0}), 4);
    CHECK(apply_uniformiser(map, 1.0) == 0.0);
    CHECK(apply_uniformiser(map, 4.0) == 1.0);
    CHECK(apply_uniformiser(map, 0.0) == 0.0);
    CHECK(apply_uniformiser(map, 99.0) == 1.0);
    CHECK_THROWS_AS(apply_uniformiser(map, std::nan("")), InputError);

    // Halfway through a bin holding 40% of the mass starting at cum 0.3.
    UniformiserMap manual;
    manual.bins = 3;
    manual.bin_edges = {0.0, 1.0, 2.0, 3.0};
    manual.cum_mass = {0.0, 0.3, 0.7, 1.0};
    CHECK(apply_uniformiser(manual, 1.5) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("apply_uniformiser: nondecreasing over the whole domain") {
    CounterRng rng(9, 0);
    std::vector<double> pool(5000);
    for (auto& v : pool) v = std::exp(2.0 * rng.next_unit());
    const auto map = fit_uniformiser(dataset_from_pool(pool), 100);
    CounterRng probe(10, 0);
    for (int i = 0; i < 2000; ++i) {
        double a = probe.next_unit() * 12.0 - 1.0;
        double b = probe.next_unit() * 12.0 - 1.0;
        if (a > b) std::swap(a, b);
        CHECK(apply_uniformiser(map, a) <= apply_uniformiser(map, b));
    }
}

TEST_CASE("transform_dataset: n, m, group untouched; out-of-range clamps") {
    std::vector<TripletRecord> records = {{"a", 1.0, 2.0, 1, 2, "g"},
                                          {"b", 3.0, 4.0, 0, 2, "h"}};
    auto ds = JudgementDataset::from_records(records);
    ds.has_group = true;
    const auto map = fit_uniformiser(ds, 4);
    const auto out = transform_dataset(map, ds);
    CHECK(out.records[0].n == 1);
    CHECK(out.records[0].m == 2);
    CHECK(out.records[0].group == "g");
    CHECK(out.records[1].group == "h");
    CHECK(out.fixed_m == 2);

    std::vector<TripletRecord> test = {{"t", 0.0, 100.0, 0, 1, std::nullopt}};
    const auto clamped = transform_dataset(map, JudgementDataset::from_records(test));
    CHECK(clamped.records[0].d0 == 0.0);
    CHECK(clamped.records[0].d1 == 1.0);
}

TEST_CASE("transform: swapping coordinates commutes exactly") {
    CounterRng rng(21, 0);
    std::vector<double> pool(2000);
    for (auto& v : pool) v = rng.next_unit() * 5.0;
    const auto ds = dataset_from_pool(pool);
    const auto map = fit_uniformiser(ds, 64);

    auto swapped = ds;
    for (auto& rec : swapped.records) std::swap(rec.d0, rec.d1);
    const auto t_then_swap = [&] {
        auto t = transform_dataset(map, ds);
        for (auto& rec : t.records) std::swap(rec.d0, rec.d1);
        return t;
    }();
    const auto swap_then_t = transform_dataset(map, swapped);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        CHECK(t_then_swap.records[i].d0 == swap_then_t.records[i].d0);
        CHECK(t_then_swap.records[i].d1 == swap_then_t.records[i].d1);
    }
}

TEST_CASE("uniformity: deciles of the fitting set within 10% +- 1.5%") {
    const std::size_t t_count = 10000;
    CounterRng rng(33, 0);
    std::vector<double> pool(2 * t_count);
    for (std::size_t i = 0; i < pool.size(); i += 2) {
        double z0 = 0.0, z1 = 0.0;
        rng.normal_pair(z0, z1);
        pool[i] = std::exp(0.4 * z0);
        pool[i + 1] = std::exp(0.4 * z1);
    }
    const auto ds = dataset_from_pool(pool);
    const auto map = fit_uniformiser(ds, 100);
    const auto transformed = transform_dataset(map, ds);

    std::vector<int> decile_counts(10, 0);
    for (const auto& rec : transformed.records) {
        for (double u : {rec.d0, rec.d1}) {
            int d = std::min(static_cast<int>(u * 10.0), 9);
            ++decile_counts[d];
        }
    }
    for (int d = 0; d < 10; ++d) {
        const double share = 100.0 * decile_counts[d] / static_cast<double>(pool.size());
        CHECK(share == doctest::Approx(10.0).epsilon(0.15));
    }
}
