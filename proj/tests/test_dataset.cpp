#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"

#include "afcfit/common.hpp"
#include "afcfit/dataset.hpp"
#include "afcfit/rng.hpp"

using namespace afcfit;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& contents) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << contents;
    return path;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

JudgementDataset random_dataset(std::size_t t, bool grouped, std::uint64_t seed) {
    std::vector<TripletRecord> records;
    CounterRng rng(seed, 0);
    for (std::size_t i = 0; i < t; ++i) {
        TripletRecord rec;
        rec.id = "r" + std::to_string(i);
        rec.d0 = rng.next_unit() * 3.0;
        rec.d1 = rng.next_unit() * 3.0;
        rec.m = 1 + static_cast<int>(rng.next_below(5));
        rec.n = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(rec.m) + 1));
        if (grouped) rec.group = (i % 3 == 0) ? "a" : "b";
        records.push_back(rec);
    }
    auto ds = JudgementDataset::from_records(std::move(records));
    ds.has_group = grouped;
    return ds;
}

}  // namespace

TEST_CASE("load_dataset: fixed m detected, order preserved") {
    const auto path = write_temp("afcfit_ds_fixed.csv",
                                 "id,d0,d1,n,m\n"
                                 "a,0.1,0.9,0,2\n"
                                 "b,0.5,0.5,1,2\n");
    const auto ds = load_dataset(path);
    REQUIRE(ds.size() == 2);
    CHECK(ds.fixed_m == 2);
    CHECK(ds.records[0].id == "a");
    CHECK(ds.records[0].d0 == 0.1);
    CHECK(ds.records[0].d1 == 0.9);
    CHECK(ds.records[0].n == 0);
    CHECK(ds.records[1].id == "b");
    CHECK_FALSE(ds.has_group);
}

TEST_CASE("load_dataset: mixed m leaves fixed_m unset") {
    const auto path = write_temp("afcfit_ds_mixed.csv",
                                 "id,d0,d1,n,m\n"
                                 "a,0.1,0.9,0,1\n"
                                 "b,0.5,0.5,1,2\n");
    const auto ds = load_dataset(path);
    CHECK_FALSE(ds.fixed_m.has_value());
}

TEST_CASE("load_dataset: n > m is a validation error naming the row") {
    const auto path = write_temp("afcfit_ds_bad_n.csv",
                                 "id,d0,d1,n,m\n"
                                 "a,0.1,0.9,3,2\n");
    CHECK_THROWS_WITH_AS(load_dataset(path), doctest::Contains("line 2"), ValidationError);
}

TEST_CASE("load_dataset: negative distance is a validation error naming the field") {
    const auto path = write_temp("afcfit_ds_bad_d.csv",
                                 "id,d0,d1,n,m\n"
                                 "a,0.1,-0.9,1,2\n");
    CHECK_THROWS_WITH_AS(load_dataset(path), doctest::Contains("d1"), ValidationError);
}

TEST_CASE("load_dataset: malformed rows are parse errors naming the row") {
    const auto bad_float = write_temp("afcfit_ds_bad_float.csv",
                                      "id,d0,d1,n,m\n"
                                      "a,0.1,0.9,0,2\n"
                                      "b,xyz,0.5,1,2\n");
    CHECK_THROWS_WITH_AS(load_dataset(bad_float), doctest::Contains("line 3"), ParseError);

    const auto bad_cols = write_temp("afcfit_ds_bad_cols.csv",
                                     "id,d0,d1,n,m\n"
                                     "a,0.1,0.9,0\n");
    CHECK_THROWS_AS(load_dataset(bad_cols), ParseError);

    const auto bad_header = write_temp("afcfit_ds_bad_header.csv", "d0,d1,n,m\na,0.1,0.9,0,2\n");
    CHECK_THROWS_AS(load_dataset(bad_header), ParseError);
}

TEST_CASE("load_dataset: missing file") {
    CHECK_THROWS_AS(load_dataset("/nonexistent/afcfit.csv"), InputError);
}

TEST_CASE("split_by_group: partition with default label") {
    std::vector<TripletRecord> records(3);
    records[0] = {"x", 0.1, 0.2, 0, 1, "a"};
    records[1] = {"y", 0.3, 0.4, 1, 1, "a"};
    records[2] = {"z", 0.5, 0.6, 0, 1, "b"};
    const auto parts = split_by_group(JudgementDataset::from_records(records));
    REQUIRE(parts.size() == 2);
    CHECK(parts.at("a").size() == 2);
    CHECK(parts.at("b").size() == 1);
    CHECK(parts.at("a").records[0].id == "x");
    CHECK(parts.at("a").records[1].id == "y");

    records[0].group.reset();
    records[1].group = "";
    records[2].group.reset();
    const auto defaults = split_by_group(JudgementDataset::from_records(records));
    REQUIRE(defaults.size() == 1);
    CHECK(defaults.at(kDefaultGroupLabel).size() == 3);
}

TEST_CASE("split_by_group: parts are disjoint and exhaustive") {
    const auto ds = random_dataset(50, true, 3);
    const auto parts = split_by_group(ds);
    std::size_t total = 0;
    for (const auto& [label, part] : parts) total += part.size();
    CHECK(total == ds.size());
}

TEST_CASE("expand_binary: per-record expansion") {
    std::vector<TripletRecord> records(1);
    records[0] = {"a", 0.2, 0.7, 2, 2, std::nullopt};
    auto expanded = expand_binary(JudgementDataset::from_records(records));
    REQUIRE(expanded.size() == 2);
    CHECK(expanded.fixed_m == 1);
    for (const auto& rec : expanded.records) {
        CHECK(rec.n == 1);
        CHECK(rec.m == 1);
        CHECK(rec.d0 == 0.2);
        CHECK(rec.d1 == 0.7);
    }

    records[0] = {"b", 0.2, 0.7, 0, 1, std::nullopt};
    expanded = expand_binary(JudgementDataset::from_records(records));
    REQUIRE(expanded.size() == 1);
    CHECK(expanded.records[0].n == 0);

    records[0] = {"c", 0.2, 0.7, 1, 3, std::nullopt};
    expanded = expand_binary(JudgementDataset::from_records(records));
    REQUIRE(expanded.size() == 3);
    CHECK(expanded.records[0].n == 1);
    CHECK(expanded.records[1].n == 0);
    CHECK(expanded.records[2].n == 0);
}

TEST_CASE("expand_binary: preserves sum of n and sum of m") {
    for (std::uint64_t seed : {1, 2, 3}) {
        const auto ds = random_dataset(200, false, seed);
        const auto expanded = expand_binary(ds);
        long n_before = 0, m_before = 0, n_after = 0, m_after = 0;
        for (const auto& rec : ds.records) {
            n_before += rec.n;
            m_before += rec.m;
        }
        for (const auto& rec : expanded.records) {
            n_after += rec.n;
            m_after += rec.m;
        }
        CHECK(n_before == n_after);
        CHECK(m_before == m_after);
        CHECK(expanded.size() == static_cast<std::size_t>(m_before));
    }
}

TEST_CASE("save/load round-trips bit-exactly") {
    for (bool grouped : {false, true}) {
        auto ds = random_dataset(64, grouped, grouped ? 11 : 12);
        // Awkward values that expose lossy formatting.
        ds.records[0].d0 = 0.1;
        ds.records[1].d0 = 1e-17;
        ds.records[2].d0 = 123456.789012345678;
        const auto path = write_temp("afcfit_ds_roundtrip.csv", "");
        save_dataset(ds, path);
        const auto loaded = load_dataset(path);
        REQUIRE(loaded.size() == ds.size());
        CHECK(loaded.has_group == ds.has_group);
        for (std::size_t i = 0; i < ds.size(); ++i) {
            CHECK(loaded.records[i].id == ds.records[i].id);
            CHECK(loaded.records[i].d0 == ds.records[i].d0);
            CHECK(loaded.records[i].d1 == ds.records[i].d1);
            CHECK(loaded.records[i].n == ds.records[i].n);
            CHECK(loaded.records[i].m == ds.records[i].m);
            if (grouped) CHECK(loaded.records[i].group == ds.records[i].group);
        }
        // Second write is byte-identical.
        const auto path2 = write_temp("afcfit_ds_roundtrip2.csv", "");
        save_dataset(loaded, path2);
        CHECK(slurp(path) == slurp(path2));
    }
}
