#include "tets/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tets {

namespace {

void check_unit_interval(double value, const char* name) {
    if (!std::isfinite(value) || value < 0.0 || value > 1.0) {
        throw std::invalid_argument(std::string("build_model: ") + name +
                                    " must lie in [0,1]");
    }
}

}  // namespace

Family family_from_string(const std::string& name) {
    std::string up(name);
    std::transform(up.begin(), up.end(), up.begin(),
                   [](unsigned char ch) { return std::toupper(ch); });
    if (up == "ANN") return Family::ANN;
    if (up == "AAN") return Family::AAN;
    if (up == "ANA") return Family::ANA;
    if (up == "AAA") return Family::AAA;
    throw std::invalid_argument("unknown model family: " + name);
}

std::string to_string(Family family) {
    switch (family) {
        case Family::ANN: return "ANN";
        case Family::AAN: return "AAN";
        case Family::ANA: return "ANA";
        case Family::AAA: return "AAA";
    }
    throw std::invalid_argument("unknown model family");
}

double InnovationsModel::sigma() const { return std::sqrt(sigma2); }

InnovationsModel build_model(Family family, int season_length,
                             const SmoothingParams& params, double sigma2) {
    check_unit_interval(params.alpha, "alpha");
    if (has_trend(family)) check_unit_interval(params.beta, "beta");
    if (has_seasonal(family)) check_unit_interval(params.gamma, "gamma");
    if (!std::isfinite(sigma2) || sigma2 <= 0.0) {
        throw std::invalid_argument("build_model: sigma2 must be positive");
    }
    if (has_seasonal(family) && season_length < 2) {
        throw std::invalid_argument("build_model: " + to_string(family) +
                                    " requires season_length >= 2");
    }

    InnovationsModel model;
    model.family = family;
    model.params = params;
    model.sigma2 = sigma2;

    switch (family) {
        case Family::ANN: {
            model.F = Eigen::MatrixXd::Ones(1, 1);
            model.w = Eigen::RowVectorXd::Ones(1);
            model.g = Eigen::VectorXd::Constant(1, params.alpha);
            break;
        }
        case Family::AAN: {
            model.F.setZero(2, 2);
            model.F << 1, 1, 0, 1;
            model.w = Eigen::RowVectorXd::Ones(2);
            model.g.resize(2);
            model.g << params.alpha, params.beta;
            break;
        }
        case Family::ANA: {
            model.season_length = season_length;
            const int n = 1 + season_length;
            model.F.setZero(n, n);
            model.F(0, 0) = 1.0;        // level carries over
            model.F(1, n - 1) = 1.0;    // refreshed seasonal = one from a full cycle back
            for (int i = 2; i < n; ++i) {
                model.F(i, i - 1) = 1.0;  // shift the seasonal block down
            }
            model.w = Eigen::RowVectorXd::Zero(n);
            model.w(0) = 1.0;
            model.w(n - 1) = 1.0;  // seasonal effect lagged a full cycle
            model.g = Eigen::VectorXd::Zero(n);
            model.g(0) = params.alpha;
            model.g(1) = params.gamma;
            break;
        }
        case Family::AAA: {
            model.season_length = season_length;
            const int n = 2 + season_length;
            model.F.setZero(n, n);
            model.F(0, 0) = 1.0;  // level_t = level_{t-1} + trend_{t-1}
            model.F(0, 1) = 1.0;
            model.F(1, 1) = 1.0;        // trend carries over
            model.F(2, n - 1) = 1.0;    // refreshed seasonal = one from a full cycle back
            for (int i = 3; i < n; ++i) {
                model.F(i, i - 1) = 1.0;  // shift the seasonal block down
            }
            model.w = Eigen::RowVectorXd::Zero(n);
            model.w(0) = 1.0;
            model.w(1) = 1.0;
            model.w(n - 1) = 1.0;  // seasonal effect lagged a full cycle
            model.g = Eigen::VectorXd::Zero(n);
            model.g(0) = params.alpha;
            model.g(1) = params.beta;
            model.g(2) = params.gamma;
            break;
        }
    }
    return model;
}

int CensoredSeries::n_censored() const {
    return static_cast<int>(std::count(is_censored.begin(), is_censored.end(), true));
}

CensoredSeries validate_series(std::vector<double> values, std::vector<double> bound) {
    if (values.size() != bound.size()) {
        throw std::invalid_argument("validate_series: values and bound lengths differ");
    }
    if (values.empty()) {
        throw std::invalid_argument("validate_series: empty series");
    }
    CensoredSeries series;
    series.is_censored.resize(values.size(), false);
    for (std::size_t t = 0; t < values.size(); ++t) {
        if (!std::isfinite(values[t])) {
            throw std::invalid_argument("validate_series: non-finite value at t=" +
                                        std::to_string(t + 1));
        }
        const double b = bound[t];
        if (std::isnan(b) || b == -std::numeric_limits<double>::infinity()) {
            throw std::invalid_argument("validate_series: invalid bound at t=" +
                                        std::to_string(t + 1));
        }
        if (b == std::numeric_limits<double>::infinity()) continue;
        const double tie_eps = 1e-9 * std::max(1.0, std::abs(b));
        if (values[t] > b + tie_eps) {
            throw std::invalid_argument(
                "validate_series: value exceeds censor bound at t=" +
                std::to_string(t + 1));
        }
        if (values[t] >= b - tie_eps) {
            values[t] = b;  // clamp ties so the flag survives round-trips
            series.is_censored[t] = true;
        }
    }
    series.values = std::move(values);
    series.bound = std::move(bound);
    return series;
}

CensoredSeries uncensored_series(std::vector<double> values) {
    std::vector<double> bound(values.size(), std::numeric_limits<double>::infinity());
    return validate_series(std::move(values), std::move(bound));
}

}  // namespace tets
