#pragma once

#include <vector>

#include "afcfit/dataset.hpp"

namespace afcfit {

// Empirical CDF of the pooled distance sample, stored as a histogram with
// piecewise-linear interpolation inside each bin. One map serves both
// coordinates, so swapping (d0, d1) commutes exactly with the transform.
struct UniformiserMap {
    int bins = 0;
    std::vector<double> bin_edges;  // bins + 1, strictly increasing
    std::vector<double> cum_mass;   // bins + 1, nondecreasing, 0 at front, 1 at back
};

// Fits the histogram CDF on the pooled sample of all 2T values {d0} u {d1}.
UniformiserMap fit_uniformiser(const JudgementDataset& ds, int bins = 1000);

// Maps x through the fitted CDF. Values outside the fitted range clamp to 0/1.
double apply_uniformiser(const UniformiserMap& map, double x);

// Applies the map to both coordinates of every record; n, m, group untouched.
JudgementDataset transform_dataset(const UniformiserMap& map, const JudgementDataset& ds);

}  // namespace afcfit
