#include "tets/censored_gaussian.hpp"

#include <cmath>
#include <stdexcept>

namespace tets {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779399461;
constexpr double kSqrt2 = 1.4142135623730950488016887;
constexpr double kSqrt2Pi = 2.5066282746310005024157653;

// Rational initial guess for the normal quantile (Acklam's approximation),
// polished below with Halley iterations to full double precision.
double quantile_seed(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - p_low) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double std_normal_pdf(double z) {
    if (!std::isfinite(z)) {
        throw std::invalid_argument("std_normal_pdf: non-finite argument");
    }
    return kInvSqrt2Pi * std::exp(-0.5 * z * z);
}

double std_normal_cdf(double z) {
    if (std::isnan(z)) return z;
    if (z == std::numeric_limits<double>::infinity()) return 1.0;
    if (z == -std::numeric_limits<double>::infinity()) return 0.0;
    // erfc keeps full relative precision in the lower tail, where the naive
    // 1 - Phi(-z) form would cancel.
    return 0.5 * std::erfc(-z / kSqrt2);
}

double std_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("std_normal_quantile: p must lie in (0,1)");
    }
    double x = quantile_seed(p);
    // Halley refinement; exp(x^2/2) stays representable for |x| < 36, which
    // covers every p representable outside the extreme denormal tails.
    for (int i = 0; i < 3 && std::abs(x) < 36.0; ++i) {
        const double e = std_normal_cdf(x) - p;
        const double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
        x -= u / (1.0 + 0.5 * x * u);
    }
    return x;
}

CensorKernelValues kernel_values(double mu, double sigma, double y_max) {
    if (!std::isfinite(mu)) {
        throw std::invalid_argument("kernel_values: non-finite mu");
    }
    if (!std::isfinite(sigma) || sigma <= 0.0) {
        throw std::invalid_argument("kernel_values: sigma must be positive");
    }
    CensorKernelValues k;
    if (y_max == std::numeric_limits<double>::infinity()) {
        return k;  // degenerate kernel: no censoring
    }
    if (!std::isfinite(y_max)) {
        throw std::invalid_argument("kernel_values: bound must be finite or +inf");
    }
    k.z = (y_max - mu) / sigma;
    // Evaluate the smaller tail with erfc and complement the other so that
    // p_un + p_max == 1 holds exactly.
    if (k.z >= 0.0) {
        k.p_max = 0.5 * std::erfc(k.z / kSqrt2);
        k.p_un = 1.0 - k.p_max;
    } else {
        k.p_un = 0.5 * std::erfc(-k.z / kSqrt2);
        k.p_max = 1.0 - k.p_un;
    }
    const double pdf = kInvSqrt2Pi * std::exp(-0.5 * k.z * k.z);
    // Far in the censored regime both pdf and p_un underflow; the inverse
    // Mills ratio tends to -z there, which keeps the kernel finite.
    k.mills = (k.p_un > 0.0 && pdf > 0.0) ? pdf / k.p_un : -k.z;
    k.c = -k.z * pdf;
    return k;
}

Moments truncated_moments(double mu, double sigma, double a) {
    if (!std::isfinite(mu)) {
        throw std::invalid_argument("truncated_moments: non-finite mu");
    }
    if (!std::isfinite(sigma) || sigma <= 0.0) {
        throw std::invalid_argument("truncated_moments: sigma must be positive");
    }
    if (a == std::numeric_limits<double>::infinity()) {
        return {mu, sigma * sigma};
    }
    if (!std::isfinite(a)) {
        throw std::invalid_argument("truncated_moments: bound must be finite or +inf");
    }
    const double alpha = (a - mu) / sigma;
    const double cdf = std_normal_cdf(alpha);
    if (cdf < 1e-300) {
        throw std::domain_error("truncated_moments: all mass censored (Phi(alpha) underflows)");
    }
    const double m = std_normal_pdf(alpha) / cdf;
    Moments out;
    out.mean = mu - sigma * m;
    out.variance = sigma * sigma * (1.0 - alpha * m - m * m);
    if (!(out.variance > 0.0)) {
        throw std::domain_error("truncated_moments: variance underflows at extreme truncation");
    }
    return out;
}

Moments censored_moments(double mu, double sigma, double a) {
    if (a == std::numeric_limits<double>::infinity()) {
        if (!std::isfinite(sigma) || sigma <= 0.0) {
            throw std::invalid_argument("censored_moments: sigma must be positive");
        }
        return {mu, sigma * sigma};
    }
    const Moments t = truncated_moments(mu, sigma, a);
    const double cdf = std_normal_cdf((a - mu) / sigma);
    return {(1.0 - cdf) * a + cdf * t.mean, t.variance};
}

}  // namespace tets
