#pragma once

#include <cstddef>
#include <span>
#include <vector>

// Small, dependency-free statistics used for weight fitting and the
// validation reports. Everything here is scalar and evaluated in a fixed
// order so results are bit-identical from run to run.
namespace asreval::stats {

double mean(std::span<const double> x);
// Population variance (divides by n).
double population_variance(std::span<const double> x);

// Sample Pearson correlation. Throws DomainError on length mismatch,
// n < 3 or zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

// Two-sided p-value for a Pearson r over n points (t test, n-2 dof).
// Returns 0 for |r| >= 1.
double pearson_pvalue(double r, std::size_t n);

// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);

double student_t_cdf(double t, double dof);
// P(|T| >= |t|).
double student_t_two_sided(double t, double dof);

double normal_cdf(double z);
double normal_quantile(double p);

struct ShapiroWilk {
    double w = 0.0;
    double p = 0.0;
};

// Royston (1995) algorithm. 3 <= n <= 5000; throws DomainError for an
// all-equal sample.
ShapiroWilk shapiro_wilk(std::span<const double> sample);

// Row-major dense matrix, just enough for least squares.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

struct OlsResult {
    std::vector<double> coefficients;  // one per design column
    std::vector<double> std_errors;
    std::vector<double> t_values;
    std::vector<double> p_values;
    std::vector<double> residuals;
    double rss = 0.0;
    std::size_t dof = 0;
};

// Least squares via Householder QR. The caller supplies the full design
// (including an intercept column if one is wanted). Throws FitError when
// rows <= cols or the design is rank deficient.
OlsResult ols(const Matrix& design, std::span<const double> target);

}  // namespace asreval::stats
