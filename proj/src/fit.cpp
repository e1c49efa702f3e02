#include "asreval/fit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "asreval/error.hpp"

namespace asreval {

Weights Weights::normalized() const {
    const double s = sum();
    if (!(s > 0.0)) throw FitError("weights cannot be normalized: sum is not positive");
    return {alpha / s, beta / s, gamma / s};
}

double integrated_score(const Weights& w, const ScoreVector& v) {
    return w.alpha * v.s_nli + w.beta * v.s_sem + w.gamma * v.s_phon;
}

namespace {

stats::OlsResult ols_rows(std::span<const FitRow> rows) {
    stats::Matrix design(rows.size(), 4);
    std::vector<double> target(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        design(i, 0) = 1.0;
        design(i, 1) = rows[i].s_nli;
        design(i, 2) = rows[i].s_sem;
        design(i, 3) = rows[i].s_phon;
        target[i] = rows[i].rating;
    }
    return stats::ols(design, target);
}

double predict(const std::vector<double>& coeffs, const FitRow& row) {
    return coeffs[0] + coeffs[1] * row.s_nli + coeffs[2] * row.s_sem + coeffs[3] * row.s_phon;
}

std::string describe(const std::vector<double>& slopes) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "(nli %.6g, sem %.6g, phon %.6g)", slopes[0], slopes[1], slopes[2]);
    return buf;
}

}  // namespace

WeightFit fit_ols(std::span<const FitRow> rows) {
    if (rows.size() <= 4)
        throw FitError("fit_ols: need more than 4 rows, got " + std::to_string(rows.size()));
    const stats::OlsResult res = ols_rows(rows);

    WeightFit fit;
    fit.intercept = res.coefficients[0];
    fit.raw_coeffs.assign(res.coefficients.begin() + 1, res.coefficients.end());
    fit.std_errors.assign(res.std_errors.begin() + 1, res.std_errors.end());
    fit.p_values.assign(res.p_values.begin() + 1, res.p_values.end());
    fit.intercept_p_value = res.p_values[0];
    fit.residuals = res.residuals;
    fit.mse = res.rss / static_cast<double>(rows.size());

    for (double c : fit.raw_coeffs) {
        if (c < 0.0)
            throw FitError("fit_ols: negative slope " + describe(fit.raw_coeffs) +
                           "; a negative weight would invert that channel");
    }
    const Weights raw{fit.raw_coeffs[0], fit.raw_coeffs[1], fit.raw_coeffs[2]};
    if (!(raw.sum() > 0.0))
        throw FitError("fit_ols: slope sum is not positive " + describe(fit.raw_coeffs));
    fit.normalized = raw.normalized();

    double max_target = 1.0;
    for (const auto& r : rows) max_target = std::max(max_target, std::fabs(r.rating));
    const auto [lo, hi] = std::minmax_element(fit.residuals.begin(), fit.residuals.end());
    if (*hi - *lo > 1e-10 * max_target && fit.residuals.size() >= 3 && fit.residuals.size() <= 5000)
        fit.shapiro = stats::shapiro_wilk(fit.residuals);
    return fit;
}

std::vector<std::size_t> fold_sizes(std::size_t n, std::size_t k) {
    if (k < 2) throw DomainError("k must be at least 2");
    if (n < k) throw DomainError("need at least k=" + std::to_string(k) + " rows, got " + std::to_string(n));
    std::vector<std::size_t> sizes(k, n / k);
    for (std::size_t i = 0; i < n % k; ++i) ++sizes[i];
    return sizes;
}

std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::mt19937_64 engine(seed);
    for (std::size_t i = n; i > 1; --i) {
        const std::uint64_t bound = i;
        const std::uint64_t threshold = (0 - bound) % bound;
        std::uint64_t r;
        do {
            r = engine();
        } while (r < threshold);
        std::swap(perm[i - 1], perm[static_cast<std::size_t>(r % bound)]);
    }
    return perm;
}

KFoldResult kfold_fit(std::span<const FitRow> rows, std::size_t k, std::uint64_t seed) {
    const auto sizes = fold_sizes(rows.size(), k);
    KFoldResult result;
    result.permutation = seeded_permutation(rows.size(), seed);

    std::size_t start = 0;
    for (std::size_t f = 0; f < k; ++f) {
        const std::size_t end = start + sizes[f];
        std::vector<FitRow> train, test;
        for (std::size_t pos = 0; pos < rows.size(); ++pos) {
            const FitRow& row = rows[result.permutation[pos]];
            (pos >= start && pos < end ? test : train).push_back(row);
        }

        const stats::OlsResult res = ols_rows(train);
        FoldReport report;
        report.fold_index = f;
        report.train_intercept = res.coefficients[0];
        report.train_coeffs.assign(res.coefficients.begin() + 1, res.coefficients.end());
        report.test_size = test.size();

        std::vector<double> predicted, actual;
        double se = 0.0;
        for (const auto& row : test) {
            const double p = predict(res.coefficients, row);
            predicted.push_back(p);
            actual.push_back(row.rating);
            se += (row.rating - p) * (row.rating - p);
        }
        report.test_mse = se / static_cast<double>(test.size());
        try {
            report.test_pearson = stats::pearson(predicted, actual);
        } catch (const DomainError&) {
            report.test_pearson.reset();
        }
        result.folds.push_back(std::move(report));
        start = end;
    }
    result.final = fit_ols(rows);
    return result;
}

std::vector<MetricCorrelation> metric_correlation_report(std::span<const CorrelationInput> rows,
                                                         const Weights& weights) {
    const std::size_t n = rows.size();
    std::vector<double> ratings(n), integrated(n), sum(n), nli(n), sem(n), phon(n), neg_wer(n);
    for (std::size_t i = 0; i < n; ++i) {
        const ScoreVector& v = rows[i].scores;
        ratings[i] = rows[i].rating;
        integrated[i] = integrated_score(weights, v);
        sum[i] = v.s_nli + v.s_sem + v.s_phon;
        nli[i] = v.s_nli;
        sem[i] = v.s_sem;
        phon[i] = v.s_phon;
        neg_wer[i] = -v.wer;
    }

    std::vector<MetricCorrelation> report;
    auto add = [&](const char* name, const std::vector<double>& series) {
        MetricCorrelation mc{name, std::nullopt};
        try {
            mc.pearson = stats::pearson(series, ratings);
        } catch (const DomainError&) {
        }
        report.push_back(std::move(mc));
    };
    add("integrated", integrated);
    add("sum", sum);
    add("nli", nli);
    add("semantic", sem);
    add("phonetic", phon);
    add("neg_wer", neg_wer);

    std::stable_sort(report.begin(), report.end(), [](const MetricCorrelation& a, const MetricCorrelation& b) {
        if (!a.pearson) return false;
        if (!b.pearson) return true;
        return *a.pearson > *b.pearson;
    });
    return report;
}

}  // namespace asreval
