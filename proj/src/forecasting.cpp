#include "tets/forecasting.hpp"

#include <cmath>
#include <stdexcept>

namespace tets {

ForecastResult forecast(const InnovationsModel& model, const Eigen::VectorXd& x_T,
                        int horizon, const std::vector<double>& levels) {
    if (x_T.size() != model.n_states()) {
        throw std::invalid_argument("forecast: origin state dimension mismatch");
    }
    if (horizon < 1) {
        throw std::invalid_argument("forecast: horizon must be positive");
    }
    for (double level : levels) {
        if (!(level > 0.0 && level < 1.0)) {
            throw std::invalid_argument("forecast: interval levels must lie in (0,1)");
        }
    }

    ForecastResult out;
    out.horizon = horizon;
    out.levels = levels;
    out.origin_state = x_T;
    out.mean.resize(horizon);
    out.variance.resize(horizon);

    const Eigen::MatrixXd noise = model.g * model.g.transpose() * model.sigma2;
    Eigen::VectorXd x = x_T;
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(model.n_states(), model.n_states());
    for (int j = 0; j < horizon; ++j) {
        out.mean[j] = model.w * x;
        out.variance[j] = model.w * P * model.w.transpose() + model.sigma2;
        x = model.F * x;
        P = model.F * P * model.F.transpose() + noise;
    }

    out.lower.resize(levels.size());
    out.upper.resize(levels.size());
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const double q = std_normal_quantile(0.5 * (1.0 + levels[i]));
        out.lower[i].resize(horizon);
        out.upper[i].resize(horizon);
        for (int j = 0; j < horizon; ++j) {
            const double half_width = q * std::sqrt(out.variance[j]);
            out.lower[i][j] = out.mean[j] - half_width;
            out.upper[i][j] = out.mean[j] + half_width;
        }
    }
    return out;
}

Moments expected_sales(double mean, double variance, double y_max) {
    if (!(variance > 0.0)) {
        throw std::invalid_argument("expected_sales: variance must be positive");
    }
    return censored_moments(mean, std::sqrt(variance), y_max);
}

}  // namespace tets
