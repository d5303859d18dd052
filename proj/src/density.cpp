#include "afcfit/density.hpp"

#include <algorithm>
#include <cmath>

#include "afcfit/common.hpp"
#include "afcfit/kern.hpp"

namespace afcfit {

namespace {

void check_unit_coords(const JudgementDataset& ds) {
    for (std::size_t t = 0; t < ds.records.size(); ++t) {
        const auto& rec = ds.records[t];
        if (!(rec.d0 >= 0.0 && rec.d0 <= 1.0 && rec.d1 >= 0.0 && rec.d1 <= 1.0)) {
            throw InputError(cat("accumulate: record ", t, " has coordinates (", rec.d0, ", ",
                                 rec.d1, ") outside [0,1]; uniformise first"));
        }
    }
}

// w[i] = exp(-(c_i - x)^2 / (2 sigma^2)), then scaled to unit sum.
void unit_weights(std::vector<double>& w, double x, double inv_two_sigma_sq, int g) {
    for (int i = 0; i < g; ++i) {
        const double d = DensityGrid::cell_center(i, g) - x;
        w[i] = std::exp(-d * d * inv_two_sigma_sq);
    }
    const double total = kern::sum(w.data(), w.size());
    kern::scale(w.data(), 1.0 / total, w.size());
}

}  // namespace

DensityGrid accumulate(const JudgementDataset& ds, double sigma, int resolution) {
    if (ds.records.empty()) throw InputError("accumulate: empty dataset");
    if (!ds.fixed_m) {
        throw InputError("accumulate: dataset has mixed m; use binary_surface instead");
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw ConfigError(cat("accumulate: sigma must be positive, got ", sigma));
    }
    if (resolution < 2) {
        throw ConfigError(cat("accumulate: grid resolution must be >= 2, got ", resolution));
    }
    check_unit_coords(ds);

    const int m = *ds.fixed_m;
    const int g = resolution;
    const std::size_t cells = static_cast<std::size_t>(g) * g;

    DensityGrid grid;
    grid.resolution = g;
    grid.sigma = sigma;
    grid.m_max = m;
    grid.per_j_mass.assign(static_cast<std::size_t>(m) + 1, std::vector<double>(cells, 0.0));

    const double inv_two_sigma_sq = 1.0 / (2.0 * sigma * sigma);
    std::vector<double> wx(g), wy(g);
    std::vector<std::int64_t> mirrored_count(static_cast<std::size_t>(m) + 1, 0);

    for (const auto& rec : ds.records) {
        unit_weights(wx, rec.d0, inv_two_sigma_sq, g);
        unit_weights(wy, rec.d1, inv_two_sigma_sq, g);
        kern::outer_acc(grid.per_j_mass[rec.n].data(), wx.data(), g, wy.data(), g);
        kern::outer_acc(grid.per_j_mass[m - rec.n].data(), wy.data(), g, wx.data(), g);
        ++mirrored_count[rec.n];
        ++mirrored_count[m - rec.n];
    }

    const double sample_size = 2.0 * static_cast<double>(ds.records.size());
    for (int j = 0; j <= m; ++j) {
        auto& sheet = grid.per_j_mass[j];
        const double mass = kern::sum(sheet.data(), sheet.size());
        const double target = static_cast<double>(mirrored_count[j]) / sample_size;
        if (mass > 0.0) {
            kern::scale(sheet.data(), target / mass, sheet.size());
        }
    }
    return grid;
}

CellConditionals conditionals(const DensityGrid& grid, double undefined_epsilon) {
    const int g = grid.resolution;
    const std::size_t cells = static_cast<std::size_t>(g) * g;
    CellConditionals cond;
    cond.resolution = g;
    cond.m_max = grid.m_max;
    cond.pr.assign((static_cast<std::size_t>(grid.m_max) + 1) * cells, 0.0);
    cond.undefined.assign(cells, 0);

    for (std::size_t c = 0; c < cells; ++c) {
        double total = 0.0;
        for (int j = 0; j <= grid.m_max; ++j) total += grid.per_j_mass[j][c];
        if (!(total >= undefined_epsilon)) {
            cond.undefined[c] = 1;
            continue;
        }
        for (int j = 0; j <= grid.m_max; ++j) {
            cond.pr[static_cast<std::size_t>(j) * cells + c] = grid.per_j_mass[j][c] / total;
        }
    }
    return cond;
}

DecisionSurface mle_surface(const DensityGrid& grid, double undefined_epsilon) {
    const auto cond = conditionals(grid, undefined_epsilon);
    const int g = grid.resolution;
    const std::size_t cells = static_cast<std::size_t>(g) * g;

    DecisionSurface surface;
    surface.resolution = g;
    surface.sigma = grid.sigma;
    surface.source = SurfaceSource::density;
    surface.values.assign(cells, 0.5);
    surface.undefined.assign(cond.undefined.begin(), cond.undefined.end());

    for (std::size_t c = 0; c < cells; ++c) {
        if (cond.undefined[c]) continue;
        double expectation = 0.0;
        for (int j = 1; j <= grid.m_max; ++j) {
            expectation += j * cond.pr[static_cast<std::size_t>(j) * cells + c];
        }
        surface.values[c] = std::clamp(expectation / grid.m_max, 0.0, 1.0);
    }

    // Exact symmetrisation: mirrored deposits make the surface symmetric up to
    // floating-point residue; this pass removes the residue.
    for (int i = 0; i < g; ++i) {
        for (int k = i; k < g; ++k) {
            const std::size_t ik = static_cast<std::size_t>(i) * g + k;
            const std::size_t ki = static_cast<std::size_t>(k) * g + i;
            if (surface.undefined[ik] || surface.undefined[ki]) {
                surface.undefined[ik] = surface.undefined[ki] = 1;
                surface.values[ik] = surface.values[ki] = 0.5;
            } else if (i == k) {
                surface.values[ik] = 0.5;
            } else {
                const double h = 0.5 * (surface.values[ik] + 1.0 - surface.values[ki]);
                surface.values[ik] = h;
                surface.values[ki] = 1.0 - h;
            }
        }
    }
    return surface;
}

DecisionSurface binary_surface(const JudgementDataset& ds, double sigma, int resolution,
                               double undefined_epsilon) {
    const auto expanded = expand_binary(ds);
    return mle_surface(accumulate(expanded, sigma, resolution), undefined_epsilon);
}

double lookup(const DecisionSurface& surface, double d0, double d1) {
    if (!std::isfinite(d0) || !std::isfinite(d1)) {
        throw InputError(cat("lookup: non-finite coordinates (", d0, ", ", d1, ")"));
    }
    const int g = surface.resolution;

    const auto axis = [g](double x, int& lo, double& frac) {
        const double u = std::clamp(x, 0.0, 1.0) * g - 0.5;
        if (u <= 0.0) {
            lo = 0;
            frac = 0.0;
        } else if (u >= g - 1.0) {
            lo = g - 2;
            frac = 1.0;
        } else {
            lo = static_cast<int>(u);
            frac = u - lo;
        }
    };

    int i = 0, k = 0;
    double fi = 0.0, fk = 0.0;
    axis(d0, i, fi);
    axis(d1, k, fk);

    const double v00 = surface.at(i, k);
    const double v01 = surface.at(i, k + 1);
    const double v10 = surface.at(i + 1, k);
    const double v11 = surface.at(i + 1, k + 1);
    const double v = (1.0 - fi) * ((1.0 - fk) * v00 + fk * v01) +
                     fi * ((1.0 - fk) * v10 + fk * v11);
    return std::clamp(v, 0.0, 1.0);
}

}  // namespace afcfit
