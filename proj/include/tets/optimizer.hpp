#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace tets {

/// Convergence contract of the derivative-free search used by estimation.
struct NelderMeadOptions {
    double ftol = 1e-8;    ///< stop when the simplex objective spread falls below
    double xtol = 1e-6;    ///< ... and the simplex parameter spread falls below
    int max_evals = 20000;
};

struct NelderMeadResult {
    Eigen::VectorXd x;
    double fmin = 0.0;
    int n_evals = 0;
    bool converged = false;
    /// Best objective value after each iteration; non-increasing by construction.
    std::vector<double> trace;
};

/**
 * @brief Nelder-Mead simplex minimization.
 *
 * Standard reflection/expansion/contraction/shrink moves from an axis-aligned
 * initial simplex around the start (5% of each coordinate, 0.1 for zeros).
 * After first convergence the simplex is rebuilt at the incumbent and the
 * search resumes, up to three times, which guards against premature collapse
 * in higher dimensions; the result is still a deterministic local search.
 */
NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                             const Eigen::VectorXd& start,
                             const NelderMeadOptions& options = {});

/// Logistic squashing used to box parameters into (0,1), and its inverse.
double squash01(double u);
double unsquash01(double theta);

}  // namespace tets
