#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace tets {

/// Implemented members of the additive ETS taxonomy.
enum class Family { ANN, AAN, ANA, AAA };

/// Parses "ANN" / "AAN" / "ANA" / "AAA" (case-insensitive).
/// Throws std::invalid_argument.
Family family_from_string(const std::string& name);
std::string to_string(Family family);

/// True for families carrying a trend state (AAN, AAA).
constexpr bool has_trend(Family family) {
    return family == Family::AAN || family == Family::AAA;
}

/// True for families carrying a seasonal block (ANA, AAA).
constexpr bool has_seasonal(Family family) {
    return family == Family::ANA || family == Family::AAA;
}

/// Number of state variables for a family at a given season length.
constexpr int state_count(Family family, int season_length) {
    return 1 + (has_trend(family) ? 1 : 0) +
           (has_seasonal(family) ? season_length : 0);
}

/// Smoothing parameters; beta applies to trended families, gamma to
/// seasonal ones.
struct SmoothingParams {
    double alpha = 0.3;
    double beta = 0.05;
    double gamma = 0.05;
};

/**
 * @brief Linear Gaussian innovations state space model
 *
 *   x_t = F x_{t-1} + g eps_t,   y*_t = w x_{t-1} + eps_t,
 *
 * with a single source of error eps_t ~ N(0, sigma2). The state layout is
 * (level), then a trend state for trended families, then the seasonal block
 * (s_t, s_{t-1}, ..., s_{t-s+1}) for seasonal ones; w picks level (+ trend)
 * + the seasonal state lagged a full cycle, and F shifts the seasonal block
 * cyclically.
 */
struct InnovationsModel {
    Family family = Family::ANN;
    int season_length = 0;  // > 0 for seasonal families only
    Eigen::MatrixXd F;
    Eigen::RowVectorXd w;
    Eigen::VectorXd g;
    double sigma2 = 1.0;
    SmoothingParams params;

    int n_states() const { return static_cast<int>(F.rows()); }
    double sigma() const;
};

/**
 * @brief Builds the system matrices for a family member.
 *
 * Smoothing parameters must lie in [0,1] and sigma2 must be positive;
 * season_length >= 2 is required for seasonal families and ignored
 * otherwise. Throws std::invalid_argument on violations.
 */
InnovationsModel build_model(Family family, int season_length,
                             const SmoothingParams& params, double sigma2);

/**
 * @brief A time series observed under censoring from above.
 *
 * values[t] <= bound[t] always; bound[t] == +infinity encodes an uncensored
 * observation. is_censored[t] is true iff values[t] reached the bound.
 * The latent uncensored value is never stored (it is unobservable).
 */
struct CensoredSeries {
    std::vector<double> values;
    std::vector<double> bound;
    std::vector<bool> is_censored;

    std::size_t size() const { return values.size(); }
    int n_censored() const;
    bool any_censored() const { return n_censored() > 0; }
};

/**
 * @brief Validates raw (values, bound) columns into a CensoredSeries.
 *
 * Equal lengths required; entries must be finite (bound may be +infinity).
 * An observation is flagged censored when values[t] >= bound[t] - tie_eps
 * with tie_eps = 1e-9 * max(1, |bound[t]|), and is then clamped to the bound
 * exactly, so CSV round-tripping cannot flip flags. values[t] above the bound
 * beyond tie_eps is an error (censoring from above is violated).
 * Throws std::invalid_argument.
 */
CensoredSeries validate_series(std::vector<double> values, std::vector<double> bound);

/// Convenience: an uncensored series (bound == +infinity everywhere).
CensoredSeries uncensored_series(std::vector<double> values);

}  // namespace tets
