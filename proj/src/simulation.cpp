#include "tets/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <thread>

#include "tets/censored_gaussian.hpp"
#include "tets/forecasting.hpp"
#include "tets/rng.hpp"

namespace tets {

namespace {

std::vector<double> clip_at(const std::vector<double>& values, double level) {
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        out[i] = std::min(values[i], level);
    }
    return out;
}

Table1Replicate score_replicate(int replicate, double level, const std::string& method,
                                const FitResult& fit, const CensoredSeries& sample,
                                const std::vector<double>& holdout, int horizon,
                                double true_sd) {
    const Eigen::VectorXd origin = forecast_origin(fit, sample);
    const ForecastResult fc = forecast(fit.model, origin, horizon);
    Table1Replicate row;
    row.replicate = replicate;
    row.censor_level = level;
    row.method = method;
    row.rmse = rmse(fc.mean, holdout);
    row.bias = me(fc.mean, holdout);
    row.sd_bias = fit.model.sigma() - true_sd;
    return row;
}

}  // namespace

std::vector<std::vector<double>> generate_gaussian(const MonteCarloConfig& config) {
    if (config.n_series < 1 || config.n_obs < 1) {
        throw std::invalid_argument("generate_gaussian: sizes must be positive");
    }
    if (!(config.sd > 0.0)) {
        throw std::invalid_argument("generate_gaussian: sd must be positive");
    }
    std::vector<std::vector<double>> out(config.n_series);
    for (int r = 0; r < config.n_series; ++r) {
        Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(r)));
        out[r].resize(config.n_obs);
        for (int t = 0; t < config.n_obs; ++t) {
            out[r][t] = rng.gaussian(config.mean, config.sd);
        }
    }
    return out;
}

Table1Result run_table1(const MonteCarloConfig& config,
                        const std::vector<double>& censor_levels, int n_threads) {
    if (censor_levels.empty()) {
        throw std::invalid_argument("run_table1: no censor levels");
    }
    if (config.horizon < 1) {
        throw std::invalid_argument("run_table1: horizon must be positive");
    }

    const int n_series = config.n_series;
    std::vector<std::vector<Table1Replicate>> per_replicate(n_series);

    int workers = n_threads > 0 ? n_threads
                                : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min(workers, n_series));

    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(workers);

    const auto run_replicate = [&](int r) {
        Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(r)));
        std::vector<double> path(config.n_obs + config.horizon);
        for (double& v : path) v = rng.gaussian(config.mean, config.sd);
        const std::vector<double> in_sample(path.begin(), path.begin() + config.n_obs);
        const std::vector<double> holdout(path.begin() + config.n_obs, path.end());

        std::vector<Table1Replicate>& rows = per_replicate[r];
        rows.reserve(2 * censor_levels.size());
        for (double level : censor_levels) {
            const std::vector<double> clipped = clip_at(in_sample, level);

            // Plain ETS pretends the clipped data is the whole truth.
            const CensoredSeries as_uncensored = uncensored_series(clipped);
            const FitResult ets = fit(as_uncensored, Family::ANN);
            rows.push_back(score_replicate(r, level, "ETS", ets, as_uncensored, holdout,
                                           config.horizon, config.sd));

            // TETS sees the censor bound.
            const CensoredSeries with_bound = validate_series(
                clipped, std::vector<double>(clipped.size(), level));
            const FitResult tets = fit(with_bound, Family::ANN);
            rows.push_back(score_replicate(r, level, "TETS", tets, with_bound, holdout,
                                           config.horizon, config.sd));
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (int r = next.fetch_add(1); r < n_series; r = next.fetch_add(1)) {
                    run_replicate(r);
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (const auto& err : errors) {
        if (err) std::rethrow_exception(err);
    }

    Table1Result result;
    result.replicates.reserve(static_cast<std::size_t>(n_series) * 2 *
                              censor_levels.size());
    for (int r = 0; r < n_series; ++r) {
        for (const auto& row : per_replicate[r]) result.replicates.push_back(row);
    }

    for (double level : censor_levels) {
        for (const char* method : {"ETS", "TETS"}) {
            Table1Row row;
            row.censor_level = level;
            row.method = method;
            int count = 0;
            for (const auto& rep : result.replicates) {
                if (rep.censor_level == level && rep.method == method) {
                    row.rmse += rep.rmse;
                    row.bias += rep.bias;
                    row.sd_bias += rep.sd_bias;
                    ++count;
                }
            }
            row.rmse /= count;
            row.bias /= count;
            row.sd_bias /= count;
            result.summary.push_back(std::move(row));
        }
    }
    return result;
}

TrendSeasonalReport run_trend_seasonal_case(const CensoredSeries& series,
                                            std::size_t split, int season_length) {
    if (split >= series.size()) {
        throw std::invalid_argument("run_trend_seasonal_case: split leaves no holdout");
    }
    const int horizon = static_cast<int>(series.size() - split);

    std::vector<double> in_values(series.values.begin(), series.values.begin() + split);
    std::vector<double> in_bound(series.bound.begin(), series.bound.begin() + split);

    const CensoredSeries as_uncensored = uncensored_series(in_values);
    const CensoredSeries with_bound = validate_series(in_values, in_bound);

    TrendSeasonalReport report;
    report.ets_fit = fit(as_uncensored, Family::AAA, season_length);
    report.tets_fit = fit(with_bound, Family::AAA, season_length);

    const ForecastResult fc_ets = forecast(
        report.ets_fit.model, forecast_origin(report.ets_fit, as_uncensored), horizon);
    const ForecastResult fc_tets = forecast(
        report.tets_fit.model, forecast_origin(report.tets_fit, with_bound), horizon);

    report.forecast_ets = fc_ets.mean;
    report.forecast_tets = fc_tets.mean;
    report.actual.assign(series.values.begin() + split, series.values.end());
    report.me_ets = me(report.forecast_ets, report.actual);
    report.me_tets = me(report.forecast_tets, report.actual);
    report.rmse_ets = rmse(report.forecast_ets, report.actual);
    report.rmse_tets = rmse(report.forecast_tets, report.actual);
    return report;
}

std::string to_string(Forecaster forecaster) {
    return forecaster == Forecaster::ETS ? "ETS" : "TETS";
}

NewsvendorResult run_newsvendor(const NewsvendorConfig& config) {
    const std::size_t n = config.demand.size();
    if (!(config.target_csl > 0.5 && config.target_csl < 1.0)) {
        throw std::invalid_argument("run_newsvendor: target_csl must lie in (0.5, 1)");
    }
    if (config.refit_every < 1) {
        throw std::invalid_argument("run_newsvendor: refit_every must be positive");
    }
    const int min_fit = state_count(config.family, config.season_length) + 2;
    if (config.warmup < min_fit) {
        throw std::invalid_argument("run_newsvendor: warmup shorter than the fitting minimum");
    }
    if (n <= static_cast<std::size_t>(config.warmup)) {
        throw std::invalid_argument("run_newsvendor: demand path shorter than warmup");
    }

    const double k = std_normal_quantile(config.target_csl);
    const double inf = std::numeric_limits<double>::infinity();
    const bool tobit = config.forecaster == Forecaster::TETS;

    // History as the forecaster sees it: sales, with the order bound declared
    // only for TETS (plain ETS treats sales as true demand).
    std::vector<double> sales_hist(config.demand.begin(),
                                   config.demand.begin() + config.warmup);
    std::vector<double> bound_hist(config.warmup, inf);

    NewsvendorResult result;
    FitResult current;
    bool have_fit = false;

    std::deque<bool> window;  // covered flags feeding the spiral-down detector
    int covered_in_window = 0;

    for (std::size_t t = config.warmup; t < n; ++t) {
        const CensoredSeries history = validate_series(sales_hist, bound_hist);

        const bool refit_due =
            !have_fit ||
            (static_cast<int>(t) - config.warmup) % config.refit_every == 0;
        if (refit_due) {
            // Race a cold start (heuristics re-derived from the current
            // history) against a warm start from the incumbent fit; a single
            // bad local optimum then cannot poison every later refit.
            std::optional<FitResult> best;
            try {
                best = fit(history, config.family, config.season_length);
            } catch (const std::exception&) {
                if (!have_fit) throw;  // nothing to fall back on
            }
            if (have_fit) {
                try {
                    FitOptions options;
                    options.start_params = current.model.params;
                    options.start_sigma = current.model.sigma();
                    options.start_x1 = current.x1;
                    const FitResult warm =
                        fit(history, config.family, config.season_length, options);
                    if (!best || warm.loglik > best->loglik) best = warm;
                } catch (const std::exception&) {
                }
            }
            if (best) {
                current = *std::move(best);
                have_fit = true;
            }
            // Otherwise keep the previous parameters; the filter refresh
            // below still folds in the new observations.
        } else if (current.init_mode == InitMode::diffuse) {
            // Parameters fixed, but the diffuse path re-derives the seed
            // state and concentrated variance from the grown history. Keep
            // the previous seed if the grown sample turns degenerate.
            try {
                const AkfRun akf = akf_filter(current.model, history, false);
                current.model.sigma2 = akf.sigma2_hat;
                current.x1 = akf.x1_hat;
            } catch (const std::exception&) {
            }
        }

        const Eigen::VectorXd origin = forecast_origin(current, history);
        const ForecastResult fc = forecast(current.model, origin, 1);
        const double point = fc.mean[0];
        const double sigma = std::sqrt(fc.variance[0]);
        // Negative order-up-to levels make no physical sense; floor at zero.
        const double order_up_to = std::max(point + k * sigma, 0.0);

        const double demand = config.demand[t];
        const double sales = std::min(demand, order_up_to);
        const bool censored = demand > order_up_to;

        sales_hist.push_back(sales);
        bound_hist.push_back(tobit ? order_up_to : inf);

        NewsvendorPeriod period;
        period.t = static_cast<int>(t) + 1;
        period.demand = demand;
        period.forecast = point;
        period.sigma = sigma;
        period.order_up_to = order_up_to;
        period.sales = sales;
        period.censored = censored;
        result.log.push_back(period);

        window.push_back(!censored);
        covered_in_window += censored ? 0 : 1;
        if (static_cast<int>(window.size()) > kSpiralWindow) {
            covered_in_window -= window.front() ? 1 : 0;
            window.pop_front();
        }
        if (static_cast<int>(window.size()) == kSpiralWindow) {
            const double trailing = static_cast<double>(covered_in_window) / kSpiralWindow;
            result.min_trailing_csl = std::min(result.min_trailing_csl, trailing);
            if (trailing < config.target_csl - kSpiralMargin && !result.spiral_down) {
                result.spiral_down = true;
                result.spiral_down_at = period.t;
            }
        }
    }

    std::vector<double> demands, forecasts, orders;
    demands.reserve(result.log.size());
    for (const auto& period : result.log) {
        demands.push_back(period.demand);
        forecasts.push_back(period.forecast);
        orders.push_back(period.order_up_to);
    }
    const InventoryKpis kpis = inventory_kpis(demands, orders);
    result.report.rmse = rmse(forecasts, demands);
    result.report.me = me(forecasts, demands);
    result.report.lost_sales = kpis.lost_sales;
    result.report.excess_stock = kpis.excess_stock;
    result.report.achieved_csl = kpis.achieved_csl;
    result.report.n = result.log.size();
    return result;
}

TrendSeasonalFixture make_trend_seasonal_fixture(std::uint64_t seed) {
    constexpr int n = 144;
    constexpr int s = 12;
    constexpr double level0 = 100.0;
    constexpr double trend = 0.35;
    constexpr double noise_sd = 4.0;
    // Fixed additive seasonal pattern (sums to zero over the cycle).
    constexpr double pattern[s] = {-10.0, -13.0, -6.0, -1.0, 4.0,  9.0,
                                   14.0,  12.0,  6.0,  -2.0, -7.0, -6.0};

    TrendSeasonalFixture fixture;
    fixture.split = 120;
    fixture.season_length = s;
    fixture.values.resize(n);
    fixture.bound.assign(n, std::numeric_limits<double>::infinity());

    Rng rng(seed);
    for (int t = 0; t < n; ++t) {
        fixture.values[t] = level0 + trend * t + pattern[t % s] + rng.gaussian(0.0, noise_sd);
    }
    // Linearly rising censor window late in the sample, below the seasonal peaks.
    for (int t = 84; t < 120; ++t) {
        fixture.bound[t] = 124.0 + 0.25 * (t - 84);
    }
    return fixture;
}

std::vector<double> make_m5_like_demand(std::uint64_t seed, int n_obs) {
    if (n_obs < 1) {
        throw std::invalid_argument("make_m5_like_demand: n_obs must be positive");
    }
    constexpr double level = 350.0;
    // Weekly cycle, weekend-heavy, sums to zero.
    constexpr double pattern[7] = {-40.0, -55.0, -30.0, -10.0, 15.0, 60.0, 60.0};
    // Day-to-day noise is Laplace rather than Gaussian: store-level daily
    // aggregates are strongly peaked around their seasonal mean yet carry
    // heavy tails on both sides (events, closures).
    constexpr double laplace_scale = 25.5;  // sd ~= 36

    std::vector<double> demand(n_obs);
    Rng rng(seed);
    for (int t = 0; t < n_obs; ++t) {
        const double u = std::clamp(rng.uniform(), 1e-12, 1.0 - 1e-12);
        const double base = u < 0.5 ? laplace_scale * std::log(2.0 * u)
                                    : -laplace_scale * std::log(2.0 * (1.0 - u));
        demand[t] = std::max(0.0, level + pattern[t % 7] + base);
    }
    return demand;
}

}  // namespace tets
