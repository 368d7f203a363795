#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "tets/filters.hpp"
#include "tets/model.hpp"
#include "tets/rng.hpp"

using namespace tets;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

bool close_abs(double a, double b, double tol) { return std::abs(a - b) <= tol; }

InnovationsModel ann_model(double alpha, double sigma2) {
    SmoothingParams p;
    p.alpha = alpha;
    return build_model(Family::ANN, 0, p, sigma2);
}
}  // namespace

TEST_SUITE("filters") {

TEST_CASE("plain filter on a deterministic trend line") {
    SmoothingParams p;
    p.alpha = 0.25;
    p.beta = 0.05;
    const InnovationsModel m = build_model(Family::AAN, 0, p, 1.0);
    Eigen::VectorXd x1(2);
    x1 << 5.0, 3.0;
    const CensoredSeries series = uncensored_series({8.0, 11.0, 14.0, 17.0});
    const FilterRun run = plain_filter(m, series, x1);
    REQUIRE(run.states.size() == 4);
    for (int t = 0; t < 4; ++t) {
        CHECK(run.predicted_mean[t] == 8.0 + 3.0 * t);
        CHECK(run.innovations[t] == 0.0);
    }
    CHECK(run.states.back()(0) == 17.0);
    CHECK(run.states.back()(1) == 3.0);
    // Zero innovations: the Gaussian log-likelihood is n * ln phi(0)/sigma.
    CHECK(close_abs(run.loglik, 4.0 * gaussian_loglik_term(0.0, 1.0), 1e-12));
    CHECK(run.n_censored == 0);
}

TEST_CASE("plain filter hand-traced ANN recursion") {
    const InnovationsModel m = ann_model(0.3, 400.0);
    Eigen::VectorXd x1(1);
    x1 << 100.0;
    const CensoredSeries series = uncensored_series({105.0, 100.0, 92.0});
    const FilterRun run = plain_filter(m, series, x1);
    CHECK(run.predicted_mean[0] == 100.0);
    CHECK(run.innovations[0] == 5.0);
    CHECK(run.states[0](0) == 101.5);
    CHECK(run.predicted_mean[1] == 101.5);
    CHECK(run.innovations[1] == -1.5);
    CHECK(run.states[1](0) == 101.05);
    CHECK(close_abs(run.predicted_mean[2], 101.05, 1e-12));
    CHECK(close_abs(run.states[2](0), 101.05 + 0.3 * (92.0 - 101.05), 1e-12));
}

TEST_CASE("plain filter dimension validation") {
    const InnovationsModel m = ann_model(0.3, 1.0);
    Eigen::VectorXd wrong(2);
    wrong << 1.0, 2.0;
    CHECK_THROWS_AS(plain_filter(m, uncensored_series({1.0}), wrong),
                    std::invalid_argument);
}

TEST_CASE("tobit filter equals plain filter bitwise without censoring") {
    SmoothingParams p;
    p.alpha = 0.42;
    p.beta = 0.07;
    const InnovationsModel m = build_model(Family::AAN, 0, p, 2.25);
    Eigen::VectorXd x1(2);
    x1 << 40.0, -0.5;
    Rng rng(555);
    std::vector<double> values;
    for (int t = 0; t < 200; ++t) values.push_back(rng.gaussian(40.0 - 0.5 * t, 1.5));
    const CensoredSeries series = uncensored_series(values);
    const FilterRun a = plain_filter(m, series, x1);
    const FilterRun b = tobit_filter(m, series, x1);
    REQUIRE(a.states.size() == b.states.size());
    for (std::size_t t = 0; t < a.states.size(); ++t) {
        CHECK(a.predicted_mean[t] == b.predicted_mean[t]);  // bitwise
        CHECK(a.innovations[t] == b.innovations[t]);
        CHECK((a.states[t] - b.states[t]).cwiseAbs().maxCoeff() == 0.0);
    }
    CHECK(a.loglik == b.loglik);
    CHECK(b.n_censored == 0);
}

TEST_CASE("tobit filter equals plain filter for seasonal models too") {
    SmoothingParams p;
    p.alpha = 0.3;
    p.gamma = 0.12;
    const InnovationsModel m = build_model(Family::ANA, 4, p, 1.0);
    Eigen::VectorXd x1(5);
    x1 << 20.0, 2.0, -1.0, 0.5, -1.5;
    Rng rng(556);
    std::vector<double> values;
    for (int t = 0; t < 120; ++t) values.push_back(rng.gaussian(20.0, 2.0));
    const CensoredSeries series = uncensored_series(values);
    const FilterRun a = plain_filter(m, series, x1);
    const FilterRun b = tobit_filter(m, series, x1);
    for (std::size_t t = 0; t < a.states.size(); ++t) {
        CHECK(a.predicted_mean[t] == b.predicted_mean[t]);  // bitwise
        CHECK((a.states[t] - b.states[t]).cwiseAbs().maxCoeff() == 0.0);
    }
    CHECK(a.loglik == b.loglik);
}

TEST_CASE("tobit filter single censored step") {
    // mu = 100, sigma = 20, bound = 100, observation at the bound.
    const InnovationsModel m = ann_model(0.3, 400.0);
    Eigen::VectorXd x1(1);
    x1 << 100.0;
    const CensoredSeries series = validate_series({100.0}, {100.0});
    const FilterRun run = tobit_filter(m, series, x1);
    CHECK(run.n_censored == 1);
    CHECK(close_abs(run.predicted_mean[0], 92.021154391971346441, 1e-12));
    CHECK(close_abs(run.innovations[0], 7.9788456080286535588, 1e-12));
    const double kappa = run.kernel[0].p_un / run.kernel[0].variance_ratio();
    CHECK(close_abs(kappa, 1.3759691969420543306, 1e-12));
    CHECK(close_abs(run.states[0](0), 100.0 + kappa * 0.3 * run.innovations[0], 1e-12));
    // Censored contribution: ln p_max = ln 0.5.
    CHECK(close_abs(run.loglik, std::log(0.5), 1e-14));
}

TEST_CASE("tobit filter five-step reference trace") {
    // ANN, alpha = 0.3, sigma = 20, x1 = 100; censored at t = 2 and t = 4.
    const InnovationsModel m = ann_model(0.3, 400.0);
    Eigen::VectorXd x1(1);
    x1 << 100.0;
    const CensoredSeries series =
        validate_series({105.0, 100.0, 92.0, 100.0, 88.0}, {kInf, 100.0, kInf, 100.0, 95.0});
    REQUIRE(series.n_censored() == 2);
    const FilterRun run = tobit_filter(m, series, x1);
    REQUIRE(run.states.size() == 5);

    const double preds[5] = {100.0, 92.7487244017707157, 104.444169202594094,
                             92.3715734576707493, 90.6730927497384704};
    const double eps[5] = {5.0, 7.25127559822928433, -12.4441692025940944,
                           7.62842654232925067, -2.67309274973847039};
    const double states[5] = {101.5, 104.444169202594094, 100.710918441815866,
                              103.836607291091209, 102.887072214123301};
    for (int t = 0; t < 5; ++t) {
        CAPTURE(t);
        CHECK(close_abs(run.predicted_mean[t], preds[t], 1e-11));
        CHECK(close_abs(run.innovations[t], eps[t], 1e-11));
        CHECK(close_abs(run.states[t](0), states[t], 1e-11));
    }
    CHECK(run.n_censored == 2);
    CHECK(close_abs(run.loglik, -13.582598805770446473, 1e-10));
}

TEST_CASE("tobit filter skips the gain when censoring is near-certain") {
    // Bound far below the prediction: p_un underflows past the 1e-12 floor,
    // the state must coast on F x and the likelihood keeps ln p_max ~ 0.
    const InnovationsModel m = ann_model(0.3, 1.0);
    Eigen::VectorXd x1(1);
    x1 << 100.0;
    const CensoredSeries series = validate_series({50.0}, {50.0});
    const FilterRun run = tobit_filter(m, series, x1);
    CHECK(run.states[0](0) == 100.0);
    CHECK(run.n_censored == 1);
    CHECK(close_abs(run.loglik, 0.0, 1e-12));  // ln P(censored) with P ~ 1
    CHECK(std::isfinite(run.loglik));
}

TEST_CASE("tobit predictions never exceed the bound") {
    const InnovationsModel m = ann_model(0.4, 25.0);
    Eigen::VectorXd x1(1);
    x1 << 10.0;
    Rng rng(77);
    std::vector<double> values, bounds;
    for (int t = 0; t < 300; ++t) {
        const double b = 8.0 + 6.0 * rng.uniform();
        const double y = std::min(rng.gaussian(10.0, 5.0), b);
        values.push_back(y);
        bounds.push_back(b);
    }
    const CensoredSeries series = validate_series(values, bounds);
    const FilterRun r = tobit_filter(m, series, x1);
    for (std::size_t t = 0; t < series.size(); ++t) {
        CHECK(r.predicted_mean[t] <= series.bound[t] + 1e-12);
        CHECK(std::isfinite(r.states[t](0)));
    }
    CHECK(std::isfinite(r.loglik));
}

TEST_CASE("akf recovers a deterministic ANN seed exactly") {
    const InnovationsModel m = ann_model(0.3, 1.0);
    // A constant series is generated exactly by x1 = c for ANN.
    const CensoredSeries series = uncensored_series({42.0, 42.0, 42.0, 42.0, 42.0});
    const AkfRun run = akf_filter(m, series);
    CHECK(run.rank == 1);
    CHECK(close_abs(run.x1_hat(0), 42.0, 1e-10));
    CHECK(run.sigma2_hat <= 1e-10);
}

TEST_CASE("akf ANN frozen fixed-series values") {
    // Independent least-squares oracle: x1 = sum c_t (y_t - d_t) / sum c_t^2
    // with c_t = (1 - alpha)^(t-1).
    const InnovationsModel m = ann_model(0.3, 1.0);
    const CensoredSeries series =
        uncensored_series({105.0, 100.0, 92.0, 100.0, 88.0, 95.0, 103.0, 97.0});
    const AkfRun run = akf_filter(m, series);
    CHECK(run.rank == 1);
    CHECK(close_abs(run.x1_hat(0), 99.0910274146875, 1e-9));
    CHECK(close_abs(run.sigma2_hat, 40.8761870037347, 1e-8));
    CHECK(close_abs(run.loglik_diffuse, -16.8219247031504, 1e-8));

    // The plain Gaussian log-likelihood at the delivered (x1, sigma2).
    InnovationsModel m2 = m;
    m2.sigma2 = run.sigma2_hat;
    const FilterRun plain = plain_filter(m2, series, run.x1_hat);
    CHECK(close_abs(plain.loglik, -25.6936989402074, 1e-8));
}

TEST_CASE("akf AAN frozen fixed-series values") {
    SmoothingParams p;
    p.alpha = 0.25;
    p.beta = 0.05;
    const InnovationsModel m = build_model(Family::AAN, 0, p, 1.0);
    const CensoredSeries series = uncensored_series(
        {12.0, 14.5, 16.0, 19.5, 21.0, 24.5, 25.0, 28.5, 31.0, 32.5});
    const AkfRun run = akf_filter(m, series);
    CHECK(run.rank == 2);
    CHECK(close_abs(run.x1_hat(0), 9.69471399508403, 1e-8));
    CHECK(close_abs(run.x1_hat(1), 2.32149600091798, 1e-8));
    CHECK(close_abs(run.sigma2_hat, 0.48377111924443, 1e-9));
    CHECK(close_abs(run.loglik_diffuse, -3.23495099068572, 1e-8));
}

TEST_CASE("akf least-squares property on random AAN data") {
    // The AKF seed must agree with an explicit design-matrix least squares
    // built from unit-seed plain-filter runs.
    SmoothingParams p;
    p.alpha = 0.35;
    p.beta = 0.08;
    const InnovationsModel m = build_model(Family::AAN, 0, p, 1.0);
    Rng rng(2026);
    std::vector<double> values;
    double level = 30.0, trend = 1.2;
    for (int t = 0; t < 40; ++t) {
        const double e = rng.gaussian(0.0, 2.0);
        values.push_back(level + trend + e);
        level = level + trend + 0.35 * e;
        trend = trend + 0.08 * e;
    }
    const CensoredSeries series = uncensored_series(values);
    const AkfRun run = akf_filter(m, series);

    const int n = static_cast<int>(series.size());
    Eigen::VectorXd zero2 = Eigen::VectorXd::Zero(2);
    const FilterRun base = plain_filter(m, series, zero2);
    Eigen::MatrixXd X(n, 2);
    for (int j = 0; j < 2; ++j) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(2);
        e(j) = 1.0;
        const FilterRun unit = plain_filter(m, series, e);
        for (int t = 0; t < n; ++t)
            X(t, j) = unit.predicted_mean[t] - base.predicted_mean[t];
    }
    Eigen::VectorXd resid(n);
    for (int t = 0; t < n; ++t) resid(t) = values[t] - base.predicted_mean[t];
    const Eigen::VectorXd ls = X.colPivHouseholderQr().solve(resid);
    CHECK(close_abs(run.x1_hat(0), ls(0), 1e-7));
    CHECK(close_abs(run.x1_hat(1), ls(1), 1e-7));

    const Eigen::VectorXd r = resid - X * ls;
    const double sig2_ls = r.squaredNorm() / (n - 2);
    CHECK(close_abs(run.sigma2_hat, sig2_ls, 1e-7 * sig2_ls));
}

TEST_CASE("akf AAA rank deficiency and deterministic recovery") {
    SmoothingParams p;
    p.alpha = 0.2;
    p.beta = 0.05;
    p.gamma = 0.1;
    const InnovationsModel m = build_model(Family::AAA, 4, p, 1.0);
    // y_t = 10 + 0.5 t + dev[t % 4] for t = 1..16 with dev = {3,-1,-2,0}.
    const double dev[4] = {3.0, -1.0, -2.0, 0.0};
    std::vector<double> values;
    for (int t = 1; t <= 16; ++t) values.push_back(10.0 + 0.5 * t + dev[t % 4]);
    const CensoredSeries series = uncensored_series(values);
    const AkfRun run = akf_filter(m, series);
    CHECK(run.rank == 5);  // one exact non-identifiable direction
    CHECK(run.sigma2_hat <= 1e-9);

    // The delivered seed must reproduce the series exactly through the filter.
    const FilterRun replay = plain_filter(m, series, run.x1_hat);
    for (std::size_t t = 0; t < series.size(); ++t)
        CHECK(close_abs(replay.innovations[t], 0.0, 1e-6));

    // Minimum-norm representative frozen from the eigendecomposition oracle.
    CHECK(close_abs(run.x1_hat(0), 8.0, 1e-6));
    CHECK(close_abs(run.x1_hat(1), 0.5, 1e-6));
    CHECK(close_abs(run.x1_hat(2), 5.0, 1e-6));
    CHECK(close_abs(run.x1_hat(3), 2.0, 1e-6));
    CHECK(close_abs(run.x1_hat(4), 0.0, 1e-6));
    CHECK(close_abs(run.x1_hat(5), 1.0, 1e-6));
}

TEST_CASE("akf ANA rank deficiency and deterministic recovery") {
    SmoothingParams p;
    p.alpha = 0.3;
    p.gamma = 0.1;
    const InnovationsModel m = build_model(Family::ANA, 4, p, 1.0);
    // y_t = 10 + dev[t % 4] for t = 1..12 with dev = {3,-1,-2,0}.
    const double dev[4] = {3.0, -1.0, -2.0, 0.0};
    std::vector<double> values;
    for (int t = 1; t <= 12; ++t) values.push_back(10.0 + dev[t % 4]);
    const CensoredSeries series = uncensored_series(values);
    const AkfRun run = akf_filter(m, series);
    // Level vs seasonal mean leaves one non-identifiable direction.
    CHECK(run.rank == 4);
    CHECK(run.sigma2_hat <= 1e-9);

    const FilterRun replay = plain_filter(m, series, run.x1_hat);
    for (std::size_t t = 0; t < series.size(); ++t)
        CHECK(close_abs(replay.innovations[t], 0.0, 1e-6));

    // Minimum-norm representative: shifting c into the level against all
    // seasonal slots, ||x1(c)||^2 is minimized at c = -2.
    CHECK(close_abs(run.x1_hat(0), 8.0, 1e-6));
    CHECK(close_abs(run.x1_hat(1), 5.0, 1e-6));
    CHECK(close_abs(run.x1_hat(2), 2.0, 1e-6));
    CHECK(close_abs(run.x1_hat(3), 0.0, 1e-6));
    CHECK(close_abs(run.x1_hat(4), 1.0, 1e-6));
}

TEST_CASE("gaussian loglik term") {
    CHECK(close_abs(gaussian_loglik_term(0.0, 1.0),
                    std::log(0.3989422804014326779), 1e-14));
    CHECK(close_abs(gaussian_loglik_term(2.0, 2.0),
                    std::log(0.2419707245191433498 / 2.0), 1e-14));
}

}  // TEST_SUITE
