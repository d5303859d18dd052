#include "afcfit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "afcfit/common.hpp"
#include "afcfit/rng.hpp"

namespace afcfit {

namespace {

// Mean of per-record terms, summed in sorted order so the result is exactly
// invariant under dataset permutation.
double sorted_mean(std::vector<double>& terms) {
    std::sort(terms.begin(), terms.end());
    double total = 0.0;
    for (double v : terms) total += v;
    return total / static_cast<double>(terms.size());
}

double record_nll(const TripletRecord& rec, double p) {
    const double pmf = binomial_pmf(rec.n, rec.m, std::clamp(p, 0.0, 1.0));
    return -std::log(std::max(pmf, kProbabilityFloor));
}

double record_aj_term(const TripletRecord& rec, double p) {
    const double mode = std::floor((rec.m + 1) * std::clamp(p, 0.0, 1.0));
    const double clamped = std::clamp(mode, 0.0, static_cast<double>(rec.m));
    return std::abs(clamped - rec.n) / rec.m;
}

double afc2_term(const TripletRecord& rec, double decision) {
    const double rate = static_cast<double>(rec.n) / rec.m;
    return decision * rate + (1.0 - rate) * (1.0 - decision);
}

template <typename PerRecord>
double mean_over(const JudgementDataset& ds, PerRecord&& term) {
    std::vector<double> terms;
    terms.reserve(ds.records.size());
    for (const auto& rec : ds.records) terms.push_back(term(rec));
    return sorted_mean(terms);
}

EvalScores scores_for(const JudgementDataset& real, const JudgementDataset& simulated,
                      const DecisionSurface& surface) {
    EvalScores s;
    s.aj = aj(real, surface);
    s.nll = nll(real, surface);
    s.afc2_distance_only = afc2_distance_only(real);
    s.afc2_surface = afc2_surface(real, surface);
    s.aj_simulated = aj(simulated, surface);
    s.nll_simulated = nll(simulated, surface);
    s.t_count = static_cast<std::int64_t>(real.records.size());
    return s;
}

}  // namespace

double binomial_pmf(int j, int m, double p) {
    if (m < 1) throw InputError(cat("binomial_pmf: m must be >= 1, got ", m));
    if (j < 0 || j > m) {
        throw InputError(cat("binomial_pmf: j must be in [0, ", m, "], got ", j));
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw InputError(cat("binomial_pmf: p must be in [0, 1], got ", p));
    }
    double coeff = 1.0;
    for (int i = 1; i <= j; ++i) {
        coeff = coeff * (m - j + i) / i;
    }
    double pj = 1.0;
    for (int i = 0; i < j; ++i) pj *= p;
    double qmj = 1.0;
    for (int i = 0; i < m - j; ++i) qmj *= 1.0 - p;
    return coeff * pj * qmj;
}

double nll(const JudgementDataset& ds, const DecisionSurface& surface) {
    return mean_over(ds, [&](const TripletRecord& rec) {
        return record_nll(rec, lookup(surface, rec.d0, rec.d1));
    });
}

double nll(const JudgementDataset& ds, const std::function<double(double, double)>& p_fn) {
    return mean_over(ds, [&](const TripletRecord& rec) {
        return record_nll(rec, p_fn(rec.d0, rec.d1));
    });
}

double aj(const JudgementDataset& ds, const DecisionSurface& surface) {
    const double mean = mean_over(ds, [&](const TripletRecord& rec) {
        return record_aj_term(rec, lookup(surface, rec.d0, rec.d1));
    });
    return 100.0 - 100.0 * mean;
}

double aj(const JudgementDataset& ds, const std::function<double(double, double)>& p_fn) {
    const double mean = mean_over(ds, [&](const TripletRecord& rec) {
        return record_aj_term(rec, p_fn(rec.d0, rec.d1));
    });
    return 100.0 - 100.0 * mean;
}

double afc2_distance_only(const JudgementDataset& ds) {
    const double mean = mean_over(ds, [&](const TripletRecord& rec) {
        const double decision = rec.d0 > rec.d1 ? 1.0 : (rec.d0 < rec.d1 ? 0.0 : 0.5);
        return afc2_term(rec, decision);
    });
    return 100.0 * mean;
}

double afc2_surface(const JudgementDataset& ds, const DecisionSurface& surface) {
    const double mean = mean_over(ds, [&](const TripletRecord& rec) {
        const double p = lookup(surface, rec.d0, rec.d1);
        const double decision = p > 0.5 ? 1.0 : (p < 0.5 ? 0.0 : 0.5);
        return afc2_term(rec, decision);
    });
    return 100.0 * mean;
}

JudgementDataset simulate_judgements(const JudgementDataset& ds, const DecisionSurface& surface,
                                     std::uint64_t seed) {
    JudgementDataset out = ds;
    for (std::size_t t = 0; t < out.records.size(); ++t) {
        auto& rec = out.records[t];
        const double p = lookup(surface, rec.d0, rec.d1);
        CounterRng rng(seed, t);
        rec.n = rng.binomial(rec.m, p);
    }
    return out;
}

EvalReport full_report(const JudgementDataset& ds, const DecisionSurface& surface,
                       std::uint64_t seed) {
    EvalReport report;
    report.seed = seed;

    const JudgementDataset simulated = simulate_judgements(ds, surface, seed);
    report.scores = scores_for(ds, simulated, surface);

    if (ds.has_group) {
        auto real_parts = split_by_group(ds);
        auto sim_parts = split_by_group(simulated);
        for (const auto& [label, part] : real_parts) {
            report.per_group.emplace(label, scores_for(part, sim_parts.at(label), surface));
        }
    }
    return report;
}

}  // namespace afcfit
