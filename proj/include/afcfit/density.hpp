#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "afcfit/dataset.hpp"

namespace afcfit {

inline constexpr double kDefaultSigma = 1.0 / 44.0;
inline constexpr int kDefaultGrid = 20;
inline constexpr double kDefaultUndefinedEpsilon = 1e-12;

// Kernel-smoothed mass per outcome count j = 0..M on a G x G grid of cell
// centers ((i+0.5)/G, (k+0.5)/G) over the unit square. Row index i follows
// d0, column index k follows d1. Sheet j sums to P(j) measured on the
// mirrored 2T sample; total mass is 1.
struct DensityGrid {
    int resolution = 0;
    double sigma = 0.0;
    int m_max = 0;
    std::vector<std::vector<double>> per_j_mass;  // (m_max + 1) sheets, each G*G row-major

    static double cell_center(int index, int resolution) {
        return (index + 0.5) / resolution;
    }
};

// Per-cell conditional probabilities Pr(n = j | cell).
struct CellConditionals {
    int resolution = 0;
    int m_max = 0;
    std::vector<double> pr;             // (m_max + 1) * G * G, sheet-major
    std::vector<std::uint8_t> undefined;  // G * G

    double at(int j, int cell) const {
        return pr[static_cast<std::size_t>(j) * resolution * resolution + cell];
    }
};

enum class SurfaceSource { density, mlp };

// Fitted binomial parameter surface. Cells with negligible mass are masked
// and fall back to 0.5; values + transpose == 1 is enforced exactly for the
// density source.
struct DecisionSurface {
    int resolution = 0;
    double sigma = 0.0;
    SurfaceSource source = SurfaceSource::density;
    std::vector<double> values;            // G * G row-major, d0-major
    std::vector<std::uint8_t> undefined;   // G * G

    double at(int i, int k) const { return values[static_cast<std::size_t>(i) * resolution + k]; }
};

// Sums one Gaussian kernel per record (and its mirror (d1, d0, M-n)) over the
// grid. Each kernel is normalised to unit grid mass before deposit, then each
// sheet is rescaled so its sum equals P(j); this keeps the variable-M binary
// expansion numerically equivalent to the fixed-M route.
DensityGrid accumulate(const JudgementDataset& ds, double sigma, int resolution);

CellConditionals conditionals(const DensityGrid& grid,
                              double undefined_epsilon = kDefaultUndefinedEpsilon);

// Closed-form likelihood maximiser per cell: P-hat = (1/M) sum_j j * Pr(j|cell).
DecisionSurface mle_surface(const DensityGrid& grid,
                            double undefined_epsilon = kDefaultUndefinedEpsilon);

// Variable-M route: binary-expands the dataset and fits with M = 1.
DecisionSurface binary_surface(const JudgementDataset& ds, double sigma, int resolution,
                               double undefined_epsilon = kDefaultUndefinedEpsilon);

// Bilinear interpolation between the four surrounding cell centers; edge
// values extend beyond the outer centers; coordinates clamp to [0, 1].
double lookup(const DecisionSurface& surface, double d0, double d1);

}  // namespace afcfit
