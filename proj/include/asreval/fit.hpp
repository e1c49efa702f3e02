#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "asreval/scores.hpp"
#include "asreval/stats.hpp"

namespace asreval {

struct Weights {
    double alpha = 0.0;  // NLI
    double beta = 0.0;   // semantic
    double gamma = 0.0;  // phonetic

    double sum() const noexcept { return alpha + beta + gamma; }
    // Divides by sum(); throws FitError when the sum is not positive.
    Weights normalized() const;
};

// Final weights reported for the integrated metric.
inline constexpr Weights kReportedWeights{0.40, 0.28, 0.32};

// alpha*s_nli + beta*s_sem + gamma*s_phon, no intercept.
double integrated_score(const Weights& w, const ScoreVector& v);

// One row of the regression: the three channels and the target rating.
struct FitRow {
    double s_nli = 0.0;
    double s_sem = 0.0;
    double s_phon = 0.0;
    double rating = 0.0;
};

struct WeightFit {
    std::vector<double> raw_coeffs;  // nli, sem, phon
    double intercept = 0.0;
    Weights normalized;
    std::vector<double> std_errors;  // nli, sem, phon
    std::vector<double> p_values;    // nli, sem, phon
    double intercept_p_value = 1.0;
    double mse = 0.0;
    std::vector<double> residuals;
    // Absent when the residuals are numerically constant (exact fits).
    std::optional<stats::ShapiroWilk> shapiro;
};

// OLS with intercept. Needs more than 4 rows and a full-rank design;
// throws FitError on rank deficiency or when any slope is negative or the
// slope sum is not positive.
WeightFit fit_ols(std::span<const FitRow> rows);

struct FoldReport {
    std::size_t fold_index = 0;
    std::vector<double> train_coeffs;  // nli, sem, phon
    double train_intercept = 0.0;
    std::size_t test_size = 0;
    std::optional<double> test_pearson;  // absent if undefined on the fold
    double test_mse = 0.0;
};

struct KFoldResult {
    std::vector<FoldReport> folds;
    WeightFit final;                      // fit on all rows
    std::vector<std::size_t> permutation;  // shuffled row order used for the split
};

// Seeded shuffle, contiguous folds (remainder to the earliest folds),
// per-fold train/test, then a final fit on everything.
KFoldResult kfold_fit(std::span<const FitRow> rows, std::size_t k, std::uint64_t seed);

// Fold sizes for n rows split k ways.
std::vector<std::size_t> fold_sizes(std::size_t n, std::size_t k);

// Fisher-Yates driven by mt19937_64 with rejection sampling, so the order
// depends only on the seed.
std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed);

struct MetricCorrelation {
    std::string metric;
    std::optional<double> pearson;  // absent when a series has zero variance
};

struct CorrelationInput {
    ScoreVector scores;
    double rating = 0.0;
};

// Pearson of each metric with the mean human rating: integrated, sum,
// nli, semantic, phonetic, neg_wer. Sorted descending; ties keep that
// order; undefined correlations last.
std::vector<MetricCorrelation> metric_correlation_report(std::span<const CorrelationInput> rows,
                                                         const Weights& weights);

}  // namespace asreval
