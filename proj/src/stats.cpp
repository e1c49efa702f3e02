#include "asreval/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "asreval/error.hpp"

namespace asreval::stats {

double mean(std::span<const double> x) {
    if (x.empty()) throw DomainError("mean of empty sample");
    double sum = 0.0;
    for (double v : x) sum += v;
    return sum / static_cast<double>(x.size());
}

double population_variance(std::span<const double> x) {
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return ss / static_cast<double>(x.size());
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw DomainError("pearson: length mismatch (" + std::to_string(x.size()) + " vs " +
                          std::to_string(y.size()) + ")");
    if (x.size() < 3) throw DomainError("pearson: need at least 3 points");
    const double mx = mean(x);
    const double my = mean(y);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw DomainError("pearson: zero variance");
    const double r = sxy / std::sqrt(sxx * syy);
    return std::clamp(r, -1.0, 1.0);
}

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIter = 500;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (a <= 0.0 || b <= 0.0) throw DomainError("incomplete_beta: a and b must be positive");
    if (x < 0.0 || x > 1.0) throw DomainError("incomplete_beta: x outside [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided(double t, double dof) {
    if (dof <= 0.0) throw DomainError("student_t: dof must be positive");
    if (std::isinf(t)) return 0.0;
    return incomplete_beta(dof / 2.0, 0.5, dof / (dof + t * t));
}

double student_t_cdf(double t, double dof) {
    const double tail = 0.5 * student_t_two_sided(t, dof);
    return t >= 0.0 ? 1.0 - tail : tail;
}

double pearson_pvalue(double r, std::size_t n) {
    if (n < 3) throw DomainError("pearson_pvalue: n must be >= 3");
    if (std::isnan(r)) throw DomainError("pearson_pvalue: r is NaN");
    if (std::fabs(r) >= 1.0) return 0.0;
    // t = r*sqrt((n-2)/(1-r^2)); dof/(dof+t^2) simplifies to 1-r^2.
    const double dof = static_cast<double>(n - 2);
    return incomplete_beta(dof / 2.0, 0.5, 1.0 - r * r);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// Wichura, AS241 (PPND16).
double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        if (p == 0.0) return -std::numeric_limits<double>::infinity();
        if (p == 1.0) return std::numeric_limits<double>::infinity();
        throw DomainError("normal_quantile: p outside [0,1]");
    }
    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((2509.0809287301226727 * r + 33430.575583588128105) * r +
                     67265.770927008700853) * r + 45921.953931549871457) * r +
                   13731.693765509461125) * r + 1971.5909503065514427) * r +
                 133.14166789178437745) * r + 3.387132872796366608) /
               (((((((5226.495278852545925 * r + 28729.085735721942674) * r +
                     39307.89580009271061) * r + 21213.794301586595867) * r +
                   5394.1960214247511077) * r + 687.1870074920579083) * r +
                 42.313330701600911252) * r + 1.0);
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double value;
    if (r <= 5.0) {
        r -= 1.6;
        value = (((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r +
                      0.24178072517745061177) * r + 1.27045825245236838258) * r +
                    3.64784832476320460504) * r + 5.7694972214606914055) * r +
                  4.6303378461565452959) * r + 1.42343711074968357734) /
                (((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r +
                      0.0151986665636164571966) * r + 0.14810397642748007459) * r +
                    0.68976733498510000455) * r + 1.6763848301838038494) * r +
                  2.05319162663775882187) * r + 1.0);
    } else {
        r -= 5.0;
        value = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                      0.0012426609473880784386) * r + 0.026532189526576123093) * r +
                    0.29656057182850489123) * r + 1.7848265399172913358) * r +
                  5.4637849111641143699) * r + 6.6579046435011037772) /
                (((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r +
                      1.8463183175100546818e-5) * r + 7.868691311456132591e-4) * r +
                    0.0148753612908506148525) * r + 0.13692988092273580531) * r +
                  0.59983220655588793769) * r + 1.0);
    }
    return q < 0.0 ? -value : value;
}

namespace {

template <std::size_t N>
double poly(const double (&c)[N], double x) {
    double result = c[N - 1];
    for (std::size_t i = N - 1; i-- > 0;) result = result * x + c[i];
    return result;
}

}  // namespace

ShapiroWilk shapiro_wilk(std::span<const double> sample) {
    const std::size_t n = sample.size();
    if (n < 3 || n > 5000)
        throw DomainError("shapiro_wilk: sample size " + std::to_string(n) + " outside [3,5000]");

    std::vector<double> x(sample.begin(), sample.end());
    std::sort(x.begin(), x.end());
    const double range = x.back() - x.front();
    if (range < 1e-19) throw DomainError("shapiro_wilk: all sample values are equal");

    // Coefficients for the lower half; the upper half is antisymmetric.
    const std::size_t half = n / 2;
    std::vector<double> a(half);
    const double an = static_cast<double>(n);

    if (n == 3) {
        a[0] = std::numbers::sqrt2 / 2.0;
    } else {
        static constexpr double c1[] = {0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056};
        static constexpr double c2[] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
        std::vector<double> m(half);
        double summ2 = 0.0;
        for (std::size_t i = 0; i < half; ++i) {
            m[i] = normal_quantile((static_cast<double>(i + 1) - 0.375) / (an + 0.25));
            summ2 += m[i] * m[i];
        }
        summ2 *= 2.0;
        const double ssumm2 = std::sqrt(summ2);
        const double rsn = 1.0 / std::sqrt(an);
        const double a1 = poly(c1, rsn) - m[0] / ssumm2;

        std::size_t first;
        double fac;
        if (n > 5) {
            first = 2;
            const double a2 = -m[1] / ssumm2 + poly(c2, rsn);
            fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) /
                            (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
            a[1] = a2;
        } else {
            first = 1;
            fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
        }
        a[0] = a1;
        for (std::size_t i = first; i < half; ++i) a[i] = -m[i] / fac;
    }

    // W as one minus the squared-correlation complement, scaled by range.
    auto coefficient = [&](std::size_t i) {
        // Full antisymmetric vector: negative on the lower half.
        if (i < half) return -a[i];
        const std::size_t mirror = n - 1 - i;
        if (mirror < half) return a[mirror];
        return 0.0;  // middle element for odd n
    };
    double sa = 0.0, sx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sa += coefficient(i);
        sx += x[i] / range;
    }
    sa /= an;
    sx /= an;
    double ssa = 0.0, ssx = 0.0, sax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double asa = coefficient(i) - sa;
        const double xsx = x[i] / range - sx;
        ssa += asa * asa;
        ssx += xsx * xsx;
        sax += asa * xsx;
    }
    const double ssassx = std::sqrt(ssa * ssx);
    const double w1 = (ssassx - sax) * (ssassx + sax) / (ssa * ssx);

    ShapiroWilk result;
    result.w = 1.0 - w1;

    if (n == 3) {
        constexpr double pi6 = 6.0 / std::numbers::pi;
        constexpr double stqr = std::numbers::pi / 3.0;
        result.p = std::max(0.0, pi6 * (std::asin(std::sqrt(result.w)) - stqr));
        return result;
    }

    const double log_w1 = std::log(w1);
    double y = log_w1;
    double mu, sigma;
    if (n <= 11) {
        static constexpr double g[] = {-2.273, 0.459};
        static constexpr double c3[] = {0.544, -0.39978, 0.025054, -6.714e-4};
        static constexpr double c4[] = {1.3822, -0.77857, 0.062767, -0.0020322};
        const double gamma = poly(g, an);
        if (y >= gamma) {
            result.p = 1e-99;
            return result;
        }
        y = -std::log(gamma - y);
        mu = poly(c3, an);
        sigma = std::exp(poly(c4, an));
    } else {
        static constexpr double c5[] = {-1.5861, -0.31082, -0.083751, 0.0038915};
        static constexpr double c6[] = {-0.4803, -0.082676, 0.0030302};
        const double ln = std::log(an);
        mu = poly(c5, ln);
        sigma = std::exp(poly(c6, ln));
    }
    result.p = normal_cdf(-(y - mu) / sigma);
    return result;
}

OlsResult ols(const Matrix& design, std::span<const double> target) {
    const std::size_t n = design.rows;
    const std::size_t p = design.cols;
    if (target.size() != n)
        throw FitError("ols: design has " + std::to_string(n) + " rows but target has " +
                       std::to_string(target.size()));
    if (n <= p)
        throw FitError("ols: need more rows (" + std::to_string(n) + ") than parameters (" +
                       std::to_string(p) + ")");

    // Householder QR, column by column; R overwrites the upper triangle.
    Matrix qr = design;
    std::vector<double> qty(target.begin(), target.end());
    std::vector<double> col_norm(p, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += design(i, j) * design(i, j);
        col_norm[j] = std::sqrt(s);
    }
    const double scale = *std::max_element(col_norm.begin(), col_norm.end());

    for (std::size_t k = 0; k < p; ++k) {
        double norm = 0.0;
        for (std::size_t i = k; i < n; ++i) norm += qr(i, k) * qr(i, k);
        norm = std::sqrt(norm);
        if (norm <= 1e-12 * std::max(scale, 1.0))
            throw FitError("ols: design matrix is rank deficient (column " + std::to_string(k) + ")");
        const double alpha = qr(k, k) > 0.0 ? -norm : norm;
        std::vector<double> v(n - k);
        for (std::size_t i = k; i < n; ++i) v[i - k] = qr(i, k);
        v[0] -= alpha;
        double vnorm2 = 0.0;
        for (double e : v) vnorm2 += e * e;

        for (std::size_t j = k; j < p; ++j) {
            double dot = 0.0;
            for (std::size_t i = k; i < n; ++i) dot += v[i - k] * qr(i, j);
            const double f = 2.0 * dot / vnorm2;
            for (std::size_t i = k; i < n; ++i) qr(i, j) -= f * v[i - k];
        }
        double dot = 0.0;
        for (std::size_t i = k; i < n; ++i) dot += v[i - k] * qty[i];
        const double f = 2.0 * dot / vnorm2;
        for (std::size_t i = k; i < n; ++i) qty[i] -= f * v[i - k];
    }
    for (std::size_t k = 0; k < p; ++k) {
        if (std::fabs(qr(k, k)) <= 1e-12 * std::max(scale, 1.0))
            throw FitError("ols: design matrix is rank deficient (column " + std::to_string(k) + ")");
    }

    OlsResult res;
    res.coefficients.assign(p, 0.0);
    for (std::size_t k = p; k-- > 0;) {
        double s = qty[k];
        for (std::size_t j = k + 1; j < p; ++j) s -= qr(k, j) * res.coefficients[j];
        res.coefficients[k] = s / qr(k, k);
    }

    res.residuals.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double fitted = 0.0;
        for (std::size_t j = 0; j < p; ++j) fitted += design(i, j) * res.coefficients[j];
        res.residuals[i] = target[i] - fitted;
        res.rss += res.residuals[i] * res.residuals[i];
    }
    res.dof = n - p;
    const double sigma2 = res.rss / static_cast<double>(res.dof);

    // (X'X)^-1 = R^-1 R^-T; only the diagonal is needed.
    Matrix rinv(p, p);
    for (std::size_t j = 0; j < p; ++j) {
        rinv(j, j) = 1.0 / qr(j, j);
        for (std::size_t i = j; i-- > 0;) {
            double s = 0.0;
            for (std::size_t k = i + 1; k <= j; ++k) s += qr(i, k) * rinv(k, j);
            rinv(i, j) = -s / qr(i, i);
        }
    }
    res.std_errors.resize(p);
    res.t_values.resize(p);
    res.p_values.resize(p);
    for (std::size_t i = 0; i < p; ++i) {
        double diag = 0.0;
        for (std::size_t k = i; k < p; ++k) diag += rinv(i, k) * rinv(i, k);
        res.std_errors[i] = std::sqrt(sigma2 * diag);
        if (res.std_errors[i] == 0.0) {
            res.t_values[i] = res.coefficients[i] == 0.0
                                  ? 0.0
                                  : std::copysign(std::numeric_limits<double>::infinity(),
                                                  res.coefficients[i]);
            res.p_values[i] = res.coefficients[i] == 0.0 ? 1.0 : 0.0;
        } else {
            res.t_values[i] = res.coefficients[i] / res.std_errors[i];
            res.p_values[i] = student_t_two_sided(res.t_values[i], static_cast<double>(res.dof));
        }
    }
    return res;
}

}  // namespace asreval::stats
