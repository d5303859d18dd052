#include "afcfit/uniformiser.hpp"

#include <algorithm>
#include <cmath>

#include "afcfit/common.hpp"

namespace afcfit {

UniformiserMap fit_uniformiser(const JudgementDataset& ds, int bins) {
    if (ds.records.size() < 2) {
        throw ConfigError(cat("fit_uniformiser: need at least 2 records, got ",
                              ds.records.size()));
    }
    if (bins < 2) throw ConfigError(cat("fit_uniformiser: bins must be >= 2, got ", bins));

    double lo = ds.records[0].d0;
    double hi = lo;
    for (const auto& rec : ds.records) {
        lo = std::min(lo, std::min(rec.d0, rec.d1));
        hi = std::max(hi, std::max(rec.d0, rec.d1));
    }
    if (!(hi > lo)) {
        throw ValidationError("fit_uniformiser: all pooled distances are identical; "
                              "the transform is undefined");
    }

    UniformiserMap map;
    map.bins = bins;
    map.bin_edges.resize(static_cast<std::size_t>(bins) + 1);
    const double range = hi - lo;
    for (int i = 0; i <= bins; ++i) {
        map.bin_edges[i] = lo + range * (static_cast<double>(i) / bins);
    }
    map.bin_edges.front() = lo;
    map.bin_edges.back() = hi;
    for (int i = 0; i < bins; ++i) {
        if (!(map.bin_edges[i + 1] > map.bin_edges[i])) {
            throw ValidationError("fit_uniformiser: distance range too narrow for the "
                                  "requested bin count");
        }
    }

    std::vector<std::int64_t> counts(static_cast<std::size_t>(bins), 0);
    const auto deposit = [&](double x) {
        int b = static_cast<int>((x - lo) / range * bins);
        b = std::clamp(b, 0, bins - 1);
        ++counts[b];
    };
    for (const auto& rec : ds.records) {
        deposit(rec.d0);
        deposit(rec.d1);
    }

    const double total = static_cast<double>(2 * ds.records.size());
    map.cum_mass.resize(static_cast<std::size_t>(bins) + 1);
    map.cum_mass[0] = 0.0;
    std::int64_t running = 0;
    for (int i = 0; i < bins; ++i) {
        running += counts[i];
        map.cum_mass[i + 1] = static_cast<double>(running) / total;
    }
    map.cum_mass.back() = 1.0;
    return map;
}

double apply_uniformiser(const UniformiserMap& map, double x) {
    if (!std::isfinite(x)) throw InputError(cat("apply_uniformiser: non-finite input ", x));
    const double lo = map.bin_edges.front();
    const double hi = map.bin_edges.back();
    if (x <= lo) return 0.0;
    if (x >= hi) return 1.0;
    int b = static_cast<int>((x - lo) / (hi - lo) * map.bins);
    b = std::clamp(b, 0, map.bins - 1);
    // Guard against boundary rounding in the bin index.
    if (x < map.bin_edges[b]) --b;
    if (x >= map.bin_edges[b + 1]) ++b;
    const double frac = (x - map.bin_edges[b]) / (map.bin_edges[b + 1] - map.bin_edges[b]);
    const double u = map.cum_mass[b] + (map.cum_mass[b + 1] - map.cum_mass[b]) * frac;
    return std::clamp(u, 0.0, 1.0);
}

JudgementDataset transform_dataset(const UniformiserMap& map, const JudgementDataset& ds) {
    JudgementDataset out = ds;
    for (auto& rec : out.records) {
        rec.d0 = apply_uniformiser(map, rec.d0);
        rec.d1 = apply_uniformiser(map, rec.d1);
    }
    return out;
}

}  // namespace afcfit
