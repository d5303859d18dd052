#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>

#include "afcfit/dataset.hpp"
#include "afcfit/density.hpp"

namespace afcfit {

// Probability floor applied inside logarithms so masked cells and p in {0,1}
// cannot produce infinities.
inline constexpr double kProbabilityFloor = 1e-12;

// C(m,j) p^j (1-p)^(m-j) with the convention 0^0 = 1.
double binomial_pmf(int j, int m, double p);

// Mean negative log-likelihood (nats) of the judgements under the surface,
// including the binomial coefficient term; per-record m.
double nll(const JudgementDataset& ds, const DecisionSurface& surface);

// Same, with an arbitrary probability function in place of a fitted surface.
double nll(const JudgementDataset& ds, const std::function<double(double, double)>& p_fn);

// Agreement of judgements: 100 - (100/T) sum |binomial_mode - n| / m, where
// the mode is floor((m+1) p) clamped to [0, m].
double aj(const JudgementDataset& ds, const DecisionSurface& surface);
double aj(const JudgementDataset& ds, const std::function<double(double, double)>& p_fn);

// 2AFC decision agreement with the raw distance comparison (d0 > d1 picks x1);
// ties score 0.5.
double afc2_distance_only(const JudgementDataset& ds);

// 2AFC decision agreement with the surface thresholded at 0.5.
double afc2_surface(const JudgementDataset& ds, const DecisionSurface& surface);

// Replaces each n with a draw from B(m, surface(d0, d1)) using the per-record
// stream (seed, record index); everything else preserved.
JudgementDataset simulate_judgements(const JudgementDataset& ds, const DecisionSurface& surface,
                                     std::uint64_t seed);

struct EvalScores {
    double aj = 0.0;
    double nll = 0.0;
    double afc2_distance_only = 0.0;
    double afc2_surface = 0.0;
    double aj_simulated = 0.0;
    double nll_simulated = 0.0;
    std::int64_t t_count = 0;
};

struct EvalReport {
    EvalScores scores;
    std::map<std::string, EvalScores> per_group;
    std::uint64_t seed = 0;
};

// All metrics on the real judgements plus the simulated-judgement baselines,
// with a per-group breakdown. The per-group section is present only when the
// dataset carries groups.
EvalReport full_report(const JudgementDataset& ds, const DecisionSurface& surface,
                       std::uint64_t seed);

}  // namespace afcfit
