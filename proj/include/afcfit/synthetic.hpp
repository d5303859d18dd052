#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "afcfit/dataset.hpp"
#include "afcfit/density.hpp"

namespace afcfit {

enum class TruthFamily { logistic, constant, step };

// Evaluable ground-truth decision surface used by the generator and by
// recovery-error measurement.
struct Truth {
    TruthFamily family = TruthFamily::logistic;
    double param = 8.0;  // logistic slope k; constant value c; step ramp half-width

    double operator()(double d0, double d1) const;
};

struct SyntheticSpec {
    TruthFamily family = TruthFamily::logistic;
    double param = 8.0;
    std::int64_t t_count = 10000;
    int fixed_m = 2;                 // used when m_weights is empty
    std::vector<double> m_weights;   // weight of m = 1, 2, ... for variable-M data

    enum class Sampler { unit_square, lognormal_raw };
    Sampler sampler = Sampler::unit_square;
    double lognormal_mu = 0.0;
    double lognormal_sigma = 0.5;

    std::uint64_t seed = 0;
};

// Samples T distance pairs, draws n ~ B(m_t, P*(d0, d1)) from per-record
// streams of the seed, and returns the dataset plus the evaluable truth.
std::pair<JudgementDataset, Truth> generate(const SyntheticSpec& spec);

// Root-mean-square error between surface values and the truth at the defined
// cell centers.
double surface_rmse(const DecisionSurface& surface, const Truth& truth);

// The truth sampled on a G x G grid, for side-by-side comparisons.
DecisionSurface truth_surface(const Truth& truth, int resolution);

}  // namespace afcfit
