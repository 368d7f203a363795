#pragma once

#include <Eigen/Dense>
#include <vector>

#include "tets/censored_gaussian.hpp"
#include "tets/model.hpp"

namespace tets {

/**
 * @brief Output of a forward pass of the plain or Tobit innovations filter.
 *
 * states[t] is the updated state x_t; innovations[t] = values[t] -
 * predicted_mean[t]; kernel[t] is the censoring kernel used at step t (the
 * degenerate kernel for uncensored bounds and for the plain filter). loglik
 * is the Gaussian log-likelihood for the plain filter and the Tobit
 * log-likelihood (censored steps contribute ln P_max) for the Tobit filter,
 * both evaluated at the model's own sigma2.
 */
struct FilterRun {
    std::vector<Eigen::VectorXd> states;
    std::vector<double> innovations;
    std::vector<double> predicted_mean;
    std::vector<CensorKernelValues> kernel;
    double loglik = 0.0;
    int n_censored = 0;
};

/**
 * @brief Plain innovations filter from a known seed state.
 *
 * The seed x1 is the state the first observation is predicted from:
 * pred_t = w x_{t-1}, eps_t = y_t - pred_t, x_t = F x_{t-1} + g eps_t.
 * Censor bounds in the series are ignored. Throws std::invalid_argument on a
 * dimension mismatch.
 */
FilterRun plain_filter(const InnovationsModel& model, const CensoredSeries& series,
                       const Eigen::VectorXd& x1);

/**
 * @brief Tobit filter for censoring from above.
 *
 * Per step, with mu = w x_{t-1} and kernel k = kernel_values(mu, sigma,
 * bound[t]):
 *
 *   predicted_mean = p_un * (mu - sigma * m) + p_max * bound
 *   eps_t          = y_t - predicted_mean
 *   x_t            = F x_{t-1} + [p_un / (1 + c/p_un - m^2)] g eps_t
 *
 * Censored observations contribute ln p_max to the log-likelihood and
 * uncensored ones the Gaussian density of the raw innovation y_t - mu,
 * in both cases regardless of how little mass lies below the bound. When
 * p_un < 1e-12 only the gain update is skipped (the gain divides by p_un)
 * and the state coasts. With bound == +infinity every step degenerates to
 * the plain filter arithmetic, so the two runs agree bitwise.
 */
FilterRun tobit_filter(const InnovationsModel& model, const CensoredSeries& series,
                       const Eigen::VectorXd& x1);

/**
 * @brief Augmented Kalman filter run with every state diffuse.
 *
 * Runs the innovations recursions from x0 = 0 alongside the augmentation
 * A_0 = -I, V_t = -w A_{t-1}, A_t = F A_{t-1} + g V_t, accumulating
 * s_n = sum V_t' eps_t and S_n = sum V_t' V_t (prior sigma2 normalized to 1).
 * The fields deliver the exact least-squares seed state x1_hat = S_n^+ s_n,
 * the concentrated variance sigma2_hat = [sum eps^2 - s_n' x1_hat] / (n - rank)
 * and the diffuse log-likelihood
 * -0.5 [ (n - rank)(ln sigma2_hat + 1) + ln|S_n| ].
 */
struct AkfRun {
    std::vector<Eigen::VectorXd> states_minus;  ///< x_t^- from the zero seed
    std::vector<double> eps_minus;              ///< eps_t^- = y_t - w x_{t-1}^-
    std::vector<Eigen::MatrixXd> A;             ///< A_t after each update
    Eigen::MatrixXd V;                          ///< row t-1 holds V_t
    Eigen::MatrixXd S_n;
    Eigen::VectorXd s_n;
    Eigen::VectorXd x1_hat;
    double sigma2_hat = 0.0;
    double loglik_diffuse = 0.0;
    int rank = 0;  ///< numerical rank of S_n actually used
};

/**
 * @brief Runs the diffuse augmented Kalman filter.
 *
 * The series must be treated as uncensored (the caller enforces the
 * initialization policy). S_n is inverted through a symmetric
 * eigendecomposition; eigenvalues below lambda_max * 1e-12 are treated as
 * zero. AAA carries one exact non-identifiable direction (a constant added
 * to the seasonal seed and subtracted from the level), so a rank deficiency
 * of one is expected there; any other deficiency throws std::runtime_error.
 * keep_paths=false skips storing per-step trajectories (estimation hot path).
 */
AkfRun akf_filter(const InnovationsModel& model, const CensoredSeries& series,
                  bool keep_paths = true);

/// Log-density of one Gaussian innovation, ln phi(eps/sigma) - ln sigma.
double gaussian_loglik_term(double eps, double sigma);

}  // namespace tets
