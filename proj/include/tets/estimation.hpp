#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tets/filters.hpp"
#include "tets/model.hpp"
#include "tets/optimizer.hpp"

namespace tets {

/// How the initial state was handled during estimation.
enum class InitMode { diffuse, deterministic };

enum class Criterion { aic, bic };

struct FitOptions {
    /// Estimate the initial state as a fixed parameter even without censoring
    /// (the censored-sample policy applies it automatically).
    bool force_deterministic = false;
    std::optional<SmoothingParams> start_params;
    std::optional<double> start_sigma;
    std::optional<Eigen::VectorXd> start_x1;
    NelderMeadOptions optimizer;
};

/**
 * @brief A fitted model plus estimation diagnostics.
 *
 * n_params counts smoothing parameters and sigma2, plus the free initial
 * states when init_mode is deterministic — so information criteria are only
 * comparable between fits that used the same initialization mode.
 */
struct FitResult {
    InnovationsModel model;
    Eigen::VectorXd x1;
    double loglik = 0.0;
    int n_params = 0;
    double aic = 0.0;
    double bic = 0.0;
    InitMode init_mode = InitMode::diffuse;
    bool converged = false;
    int n_evals = 0;
    std::vector<std::string> at_boundary;  ///< parameters that hit the [0,1] box
    std::vector<double> optimizer_trace;   ///< monotone best-objective trace
};

/**
 * @brief Maximum-likelihood fit of one family to a censored series.
 *
 * Series without censored observations are fitted through the diffuse
 * augmented Kalman filter likelihood over the smoothing parameters alone
 * (sigma2 concentrated out, initial state from the filter). Any censored
 * observation switches to the Tobit likelihood with the initial state and
 * ln sigma estimated jointly with the smoothing parameters. Smoothing
 * parameters are kept inside [0,1] by a logistic transform; solutions on the
 * box edge are reported in at_boundary, not rejected.
 *
 * Default starts: alpha 0.3, beta 0.05, gamma 0.05; sigma from the standard
 * deviation of first differences of the uncensored observations; initial
 * state from a heuristic decomposition (level = mean of the first season,
 * zero trend, first-season deviations as the seasonal seed).
 *
 * Throws std::invalid_argument for series shorter than n_states + 2.
 */
FitResult fit(const CensoredSeries& series, Family family, int season_length = 0,
              const FitOptions& options = {});

/**
 * @brief Fits every candidate (family, season_length) and keeps the winner.
 *
 * Minimizes AIC by default (BIC via criterion); ties go to fewer parameters,
 * then to candidate order. Candidates that fail to fit are skipped; if all
 * fail, the last error is rethrown.
 */
FitResult select_model(const CensoredSeries& series,
                       const std::vector<std::pair<Family, int>>& candidates,
                       Criterion criterion = Criterion::aic,
                       const FitOptions& options = {});

/// Final filtered state of a fit on its series — the forecast origin x_T.
Eigen::VectorXd forecast_origin(const FitResult& fit, const CensoredSeries& series);

}  // namespace tets
