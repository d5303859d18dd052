#include "afcfit/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "afcfit/common.hpp"
#include "afcfit/rng.hpp"

namespace afcfit {

double Truth::operator()(double d0, double d1) const {
    switch (family) {
        case TruthFamily::logistic:
            return 1.0 / (1.0 + std::exp(-param * (d0 - d1)));
        case TruthFamily::constant:
            return param;
        case TruthFamily::step: {
            // Linear ramp of half-width `param` around the diagonal; the
            // clamp pair keeps P*(a,b) + P*(b,a) = 1 exact.
            if (!(param > 0.0)) return d0 > d1 ? 1.0 : (d0 < d1 ? 0.0 : 0.5);
            return std::clamp(0.5 + (d0 - d1) / (2.0 * param), 0.0, 1.0);
        }
    }
    return 0.5;
}

std::pair<JudgementDataset, Truth> generate(const SyntheticSpec& spec) {
    if (spec.t_count < 1) throw ConfigError(cat("generate: t_count must be >= 1, got ",
                                                spec.t_count));
    if (spec.m_weights.empty() && spec.fixed_m < 1) {
        throw ConfigError(cat("generate: fixed_m must be >= 1, got ", spec.fixed_m));
    }
    if (spec.family == TruthFamily::constant && !(spec.param >= 0.0 && spec.param <= 1.0)) {
        throw ConfigError(cat("generate: constant truth needs param in [0,1], got ", spec.param));
    }

    std::vector<double> m_cum;
    if (!spec.m_weights.empty()) {
        double total = 0.0;
        for (double w : spec.m_weights) {
            if (w < 0.0) throw ConfigError("generate: m_weights must be nonnegative");
            total += w;
        }
        if (!(total > 0.0)) throw ConfigError("generate: m_weights must not all be zero");
        double running = 0.0;
        for (double w : spec.m_weights) {
            running += w / total;
            m_cum.push_back(running);
        }
        m_cum.back() = 1.0;
    }

    const Truth truth{spec.family, spec.param};
    std::vector<TripletRecord> records;
    records.reserve(static_cast<std::size_t>(spec.t_count));

    for (std::int64_t t = 0; t < spec.t_count; ++t) {
        CounterRng rng(spec.seed, static_cast<std::uint64_t>(t));
        TripletRecord rec;
        rec.id = cat("t", t);

        if (spec.sampler == SyntheticSpec::Sampler::unit_square) {
            rec.d0 = rng.next_unit();
            rec.d1 = rng.next_unit();
        } else {
            double z0 = 0.0, z1 = 0.0;
            rng.normal_pair(z0, z1);
            rec.d0 = std::exp(spec.lognormal_mu + spec.lognormal_sigma * z0);
            rec.d1 = std::exp(spec.lognormal_mu + spec.lognormal_sigma * z1);
        }

        if (m_cum.empty()) {
            rec.m = spec.fixed_m;
        } else {
            const double u = rng.next_unit();
            rec.m = 1 + static_cast<int>(std::lower_bound(m_cum.begin(), m_cum.end(), u) -
                                         m_cum.begin());
            rec.m = std::min<int>(rec.m, static_cast<int>(m_cum.size()));
        }

        rec.n = rng.binomial(rec.m, truth(rec.d0, rec.d1));
        records.push_back(std::move(rec));
    }

    auto ds = JudgementDataset::from_records(std::move(records), "synthetic");
    return {std::move(ds), truth};
}

double surface_rmse(const DecisionSurface& surface, const Truth& truth) {
    const int g = surface.resolution;
    double sum_sq = 0.0;
    std::int64_t defined = 0;
    for (int i = 0; i < g; ++i) {
        for (int k = 0; k < g; ++k) {
            const std::size_t c = static_cast<std::size_t>(i) * g + k;
            if (surface.undefined[c]) continue;
            const double diff = surface.values[c] - truth(DensityGrid::cell_center(i, g),
                                                          DensityGrid::cell_center(k, g));
            sum_sq += diff * diff;
            ++defined;
        }
    }
    if (defined == 0) throw InputError("surface_rmse: no defined cells");
    return std::sqrt(sum_sq / static_cast<double>(defined));
}

DecisionSurface truth_surface(const Truth& truth, int resolution) {
    if (resolution < 2) {
        throw ConfigError(cat("truth_surface: resolution must be >= 2, got ", resolution));
    }
    DecisionSurface surface;
    surface.resolution = resolution;
    surface.sigma = 0.0;
    surface.source = SurfaceSource::density;
    surface.values.resize(static_cast<std::size_t>(resolution) * resolution);
    surface.undefined.assign(surface.values.size(), 0);
    for (int i = 0; i < resolution; ++i) {
        for (int k = 0; k < resolution; ++k) {
            surface.values[static_cast<std::size_t>(i) * resolution + k] =
                truth(DensityGrid::cell_center(i, resolution),
                      DensityGrid::cell_center(k, resolution));
        }
    }
    return surface;
}

}  // namespace afcfit
