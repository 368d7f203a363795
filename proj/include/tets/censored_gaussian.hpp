#pragma once

#include <limits>

namespace tets {

/**
 * @brief Per-observation censoring kernel for a Gaussian censored from above.
 *
 * Holds the quantities entering the Tobit filter step for one observation:
 * the standardized censor distance z = (y_max - mu) / sigma, the probability
 * of the observation being uncensored (p_un) or censored (p_max), the inverse
 * Mills ratio m = phi(z) / Phi(z) and the tail-weight term c = -z * phi(z).
 *
 * Invariants: p_un + p_max == 1 exactly; mills >= 0; for all finite z the
 * divisor 1 + c/p_un - mills^2 lies in (0, 1].
 */
struct CensorKernelValues {
    double z = std::numeric_limits<double>::infinity();
    double p_un = 1.0;
    double p_max = 0.0;
    double mills = 0.0;
    double c = 0.0;

    /// Variance ratio of the upper-truncated Gaussian, 1 + c/p_un - mills^2.
    /// Appears as the divisor of the censored-state gain; in (0, 1].
    double variance_ratio() const { return 1.0 + c / p_un - mills * mills; }
};

/// Moments (mean, variance) of a transformed Gaussian variable.
struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

/// Standard normal density phi(z). Throws std::invalid_argument on non-finite input.
double std_normal_pdf(double z);

/// Standard normal cdf Phi(z), absolute error below 1e-12. Accepts +/-infinity.
double std_normal_cdf(double z);

/// Inverse of std_normal_cdf. Requires p in (0,1); |Phi(q(p)) - p| <= 1e-10.
double std_normal_quantile(double p);

/**
 * @brief Censoring kernel for an observation with mean mu, scale sigma and
 *        upper bound y_max.
 *
 * y_max == +infinity encodes "no censoring" and yields the degenerate kernel
 * (p_un = 1, mills = 0, c = 0). Throws std::invalid_argument if sigma <= 0.
 */
CensorKernelValues kernel_values(double mu, double sigma, double y_max);

/**
 * @brief Mean and variance of a Gaussian(mu, sigma^2) truncated from above at a.
 *
 * mean = mu - sigma * phi(alpha) / Phi(alpha) and
 * variance = sigma^2 * (1 - alpha * m - m^2) with alpha = (a - mu) / sigma and
 * m the inverse Mills ratio. Throws std::domain_error when Phi(alpha)
 * underflows (all mass censored).
 */
Moments truncated_moments(double mu, double sigma, double a);

/**
 * @brief Mean and variance of min(X, a) for X ~ Gaussian(mu, sigma^2).
 *
 * mean = (1 - Phi(alpha)) * a + Phi(alpha) * truncated_mean; the variance
 * equals the truncated variance. a == +infinity returns (mu, sigma^2).
 */
Moments censored_moments(double mu, double sigma, double a);

}  // namespace tets
