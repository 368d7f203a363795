#include "tets/filters.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tets {

namespace {

constexpr double kLogSqrt2Pi = 0.9189385332046727417803297;
constexpr double kPUnderflow = 1e-12;

void check_dimensions(const InnovationsModel& model, const CensoredSeries& series,
                      const Eigen::VectorXd& x1, const char* where) {
    if (x1.size() != model.n_states()) {
        throw std::invalid_argument(std::string(where) +
                                    ": seed state dimension mismatch");
    }
    if (series.size() == 0) {
        throw std::invalid_argument(std::string(where) + ": empty series");
    }
}

}  // namespace

double gaussian_loglik_term(double eps, double sigma) {
    const double u = eps / sigma;
    return -kLogSqrt2Pi - std::log(sigma) - 0.5 * u * u;
}

FilterRun plain_filter(const InnovationsModel& model, const CensoredSeries& series,
                       const Eigen::VectorXd& x1) {
    check_dimensions(model, series, x1, "plain_filter");
    const std::size_t n = series.size();
    const double sigma = model.sigma();

    FilterRun run;
    run.states.reserve(n);
    run.innovations.resize(n);
    run.predicted_mean.resize(n);
    run.kernel.resize(n);  // degenerate kernels: bounds are ignored here

    Eigen::VectorXd x = x1;
    for (std::size_t t = 0; t < n; ++t) {
        const double pred = model.w * x;
        const double eps = series.values[t] - pred;
        x = model.F * x + model.g * eps;
        run.predicted_mean[t] = pred;
        run.innovations[t] = eps;
        run.states.push_back(x);
        run.loglik += gaussian_loglik_term(eps, sigma);
    }
    return run;
}

FilterRun tobit_filter(const InnovationsModel& model, const CensoredSeries& series,
                       const Eigen::VectorXd& x1) {
    check_dimensions(model, series, x1, "tobit_filter");
    const std::size_t n = series.size();
    const double sigma = model.sigma();

    FilterRun run;
    run.states.reserve(n);
    run.innovations.resize(n);
    run.predicted_mean.resize(n);
    run.kernel.resize(n);
    run.n_censored = series.n_censored();

    Eigen::VectorXd x = x1;
    for (std::size_t t = 0; t < n; ++t) {
        const double bound = series.bound[t];
        if (bound == std::numeric_limits<double>::infinity()) {
            // Degenerate kernel: identical arithmetic to the plain filter.
            const double pred = model.w * x;
            const double eps = series.values[t] - pred;
            x = model.F * x + model.g * eps;
            run.predicted_mean[t] = pred;
            run.innovations[t] = eps;
            run.states.push_back(x);
            run.loglik += gaussian_loglik_term(eps, sigma);
            continue;
        }

        const double mu = model.w * x;
        const CensorKernelValues k = kernel_values(mu, sigma, bound);
        // p_un * (mu - sigma m) + p_max * bound, using p_un * m = phi(z) to
        // stay finite when p_un underflows.
        const double pred = k.p_un * mu - sigma * (k.p_un * k.mills) + k.p_max * bound;
        const double eps = series.values[t] - pred;

        if (k.p_un < kPUnderflow) {
            // Essentially all mass beyond the bound: the gain divides by
            // p_un, so skip the state update and let the observation coast.
            x = model.F * x;
        } else {
            const double gain = k.p_un / k.variance_ratio();
            x = model.F * x + model.g * (gain * eps);
        }
        if (series.is_censored[t]) {
            // Floored away from zero so an impossible censoring event stays
            // finite (and astronomically penalized) for the optimizer.
            run.loglik += std::log(std::max(k.p_max, 1e-300));
        } else {
            // Uncensored steps use the raw innovation y_t - w x_{t-1}; this
            // holds however small p_un is, so a state far above the bound
            // pays the full Gaussian cost of every uncensored observation.
            run.loglik += gaussian_loglik_term(series.values[t] - mu, sigma);
        }
        run.predicted_mean[t] = pred;
        run.innovations[t] = eps;
        run.kernel[t] = k;
        run.states.push_back(x);
    }
    return run;
}

AkfRun akf_filter(const InnovationsModel& model, const CensoredSeries& series,
                  bool keep_paths) {
    const int q = model.n_states();
    const std::size_t n = series.size();
    if (static_cast<int>(n) <= q) {
        throw std::runtime_error("akf_filter: sample shorter than the diffuse state");
    }

    AkfRun run;
    if (keep_paths) {
        run.states_minus.reserve(n);
        run.A.reserve(n);
        run.V.resize(n, q);
    }
    run.eps_minus.resize(n);

    Eigen::VectorXd x = Eigen::VectorXd::Zero(q);
    Eigen::MatrixXd A = -Eigen::MatrixXd::Identity(q, q);
    Eigen::RowVectorXd Vt(q);
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(q, q);
    Eigen::VectorXd s = Eigen::VectorXd::Zero(q);
    double sum_eps2 = 0.0;

    for (std::size_t t = 0; t < n; ++t) {
        Vt.noalias() = -model.w * A;
        const double eps = series.values[t] - model.w * x;
        x = model.F * x + model.g * eps;
        A = model.F * A + model.g * Vt;
        S.noalias() += Vt.transpose() * Vt;
        s.noalias() += Vt.transpose() * eps;
        sum_eps2 += eps * eps;
        run.eps_minus[t] = eps;
        if (keep_paths) {
            run.V.row(t) = Vt;
            run.states_minus.push_back(x);
            run.A.push_back(A);
        }
    }

    // Pseudo-inverse of S_n: AAA has one exact flat direction (constant shift
    // between the level and the seasonal seed), so tolerate rank q-1 there.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(S);
    if (eig.info() != Eigen::Success) {
        throw std::runtime_error("akf_filter: eigendecomposition of S_n failed");
    }
    const Eigen::VectorXd& lambda = eig.eigenvalues();
    const double lambda_max = lambda(q - 1);
    const double cutoff = lambda_max * 1e-12;
    if (!(lambda_max > 0.0)) {
        throw std::runtime_error("akf_filter: S_n is singular (initial state not identifiable)");
    }

    int rank = 0;
    double pseudo_logdet = 0.0;
    Eigen::VectorXd inv_lambda = Eigen::VectorXd::Zero(q);
    for (int i = 0; i < q; ++i) {
        if (lambda(i) > cutoff) {
            inv_lambda(i) = 1.0 / lambda(i);
            pseudo_logdet += std::log(lambda(i));
            ++rank;
        }
    }
    const int allowed_deficiency = has_seasonal(model.family) ? 1 : 0;
    if (q - rank > allowed_deficiency) {
        throw std::runtime_error("akf_filter: S_n is singular (initial state not identifiable)");
    }
    if (static_cast<int>(n) <= rank) {
        throw std::runtime_error("akf_filter: sample shorter than the identifiable state");
    }

    run.S_n = S;
    run.s_n = s;
    run.x1_hat = eig.eigenvectors() * inv_lambda.asDiagonal() *
                 (eig.eigenvectors().transpose() * s);
    run.rank = rank;
    const double rss = std::max(sum_eps2 - s.dot(run.x1_hat), 0.0);
    run.sigma2_hat = std::max(rss / (n - rank), 1e-300);
    run.loglik_diffuse =
        -0.5 * ((n - rank) * (std::log(run.sigma2_hat) + 1.0) + pseudo_logdet);
    return run;
}

}  // namespace tets
