#pragma once

#include <Eigen/Dense>
#include <vector>

#include "tets/censored_gaussian.hpp"
#include "tets/model.hpp"

namespace tets {

/**
 * @brief Multi-step forecasts of the uncensored output.
 *
 * mean[j-1] and variance[j-1] are the j-step-ahead moments; lower/upper hold
 * one symmetric Gaussian interval per requested level. variance[0] equals
 * sigma2 exactly (the origin state is known), and variance never decreases
 * with the step for the implemented families.
 */
struct ForecastResult {
    int horizon = 0;
    std::vector<double> mean;
    std::vector<double> variance;
    std::vector<double> levels;
    std::vector<std::vector<double>> lower;  ///< [level][step]
    std::vector<std::vector<double>> upper;
    Eigen::VectorXd origin_state;
};

/**
 * @brief Point forecasts, variances and intervals from the origin state x_T.
 *
 * Applies the conditional-expectation recursions: the mean propagates the
 * state through F, and the state covariance grows as P <- F P F' + g g'
 * sigma2 from P = 0, with Var(y*_{T+j}) = w P w' + sigma2. Forecasts are of
 * the uncensored variable — no censor bound is applied. Intervals at level p
 * are mean +/- q((1+p)/2) sqrt(variance). Throws std::invalid_argument on
 * dimension mismatch, h < 1, or levels outside (0,1).
 */
ForecastResult forecast(const InnovationsModel& model, const Eigen::VectorXd& x_T,
                        int horizon, const std::vector<double>& levels = {});

/**
 * @brief Expected-sales transform for inventory evaluation: the moments of
 *        min(y*, y_max) for a Gaussian forecast (mean, variance).
 */
Moments expected_sales(double mean, double variance, double y_max);

}  // namespace tets
