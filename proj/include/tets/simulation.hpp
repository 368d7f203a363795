#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "tets/estimation.hpp"
#include "tets/metrics.hpp"
#include "tets/model.hpp"

namespace tets {

/**
 * @brief Configuration of the iid-Gaussian Monte Carlo study.
 *
 * Every harness output is a pure function of (config, seed): replicate r
 * draws from an independent stream derived as derive_seed(seed, r), so runs
 * distribute across workers without changing results.
 */
struct MonteCarloConfig {
    int n_series = 1000;
    int n_obs = 150;
    double mean = 100.0;
    double sd = 20.0;
    double censor_level = std::numeric_limits<double>::infinity();
    int horizon = 10;
    std::uint64_t seed = 1;
};

/// One aggregate row of the censored-demand Monte Carlo table.
struct Table1Row {
    double censor_level = std::numeric_limits<double>::infinity();
    std::string method;  // "ETS" or "TETS"
    double rmse = 0.0;
    double bias = 0.0;
    double sd_bias = 0.0;
};

/// Per-replicate metrics backing a Table1Row (emitted for tidy CSV output).
struct Table1Replicate {
    int replicate = 0;
    double censor_level = 0.0;
    std::string method;
    double rmse = 0.0;
    double bias = 0.0;
    double sd_bias = 0.0;
};

struct Table1Result {
    std::vector<Table1Row> summary;        // level-major, ETS before TETS
    std::vector<Table1Replicate> replicates;
};

/**
 * @brief Monte Carlo comparison of plain ETS vs TETS under censoring.
 *
 * For each replicate, simulates n_obs + horizon iid Gaussian observations,
 * clips the in-sample part at each censor level, fits ETS(A,N,N) on the
 * clipped data as if uncensored and TETS with the bound declared, forecasts
 * `horizon` steps and scores both against the uncensored holdout. Per
 * replicate it records the horizon RMSE, mean error and sigma_hat - sd;
 * the summary averages replicates. n_threads <= 0 uses the hardware count.
 */
Table1Result run_table1(const MonteCarloConfig& config,
                        const std::vector<double>& censor_levels, int n_threads = 0);

/// Seeded iid Gaussian replicates: n_series rows of n_obs draws (no clipping).
std::vector<std::vector<double>> generate_gaussian(const MonteCarloConfig& config);

/// Holdout comparison of ETS vs TETS on a series with a (possibly time-varying) bound.
struct TrendSeasonalReport {
    FitResult ets_fit;
    FitResult tets_fit;
    std::vector<double> forecast_ets;
    std::vector<double> forecast_tets;
    std::vector<double> actual;
    double me_ets = 0.0;
    double me_tets = 0.0;
    double rmse_ets = 0.0;
    double rmse_tets = 0.0;
};

/**
 * @brief Fits both methods on series[0, split) and scores the holdout.
 *
 * ETS(A,A,A) is fitted on the observed (clipped) values with the bound
 * ignored; TETS(A,A,A) sees the bound column. The holdout must be uncensored
 * for the comparison to target true values. Throws std::invalid_argument if
 * split leaves no holdout or too short a fitting sample.
 */
TrendSeasonalReport run_trend_seasonal_case(const CensoredSeries& series,
                                            std::size_t split, int season_length);

enum class Forecaster { ETS, TETS };

std::string to_string(Forecaster forecaster);

/**
 * @brief Closed-loop newsvendor configuration.
 *
 * `demand` is the true demand path y*. The loop serves it with order-up-to
 * levels F_{t+1} + k sigma_{t+1}, k = quantile(target_csl), so sales — and
 * the history the forecaster learns from — are censored by its own orders.
 * During the first `warmup` periods stock is assumed ample (sales = demand).
 * Parameters are refitted every refit_every periods; the filter and forecast
 * are refreshed every period. The seed only labels generated-demand runs;
 * the loop itself is deterministic given the demand path.
 */
struct NewsvendorConfig {
    std::vector<double> demand;
    double target_csl = 0.95;
    int warmup = 35;
    Forecaster forecaster = Forecaster::TETS;
    Family family = Family::ANA;
    int season_length = 7;
    int refit_every = 7;
    std::uint64_t seed = 0;
};

struct NewsvendorPeriod {
    int t = 0;  ///< 1-based period index
    double demand = 0.0;
    double forecast = 0.0;
    double sigma = 0.0;
    double order_up_to = 0.0;
    double sales = 0.0;
    bool censored = false;
};

struct NewsvendorResult {
    std::vector<NewsvendorPeriod> log;  ///< post-warmup periods
    EvalReport report;                  ///< forecast + inventory KPIs, post-warmup
    bool spiral_down = false;
    int spiral_down_at = -1;            ///< first flagged period (1-based), -1 if none
    double min_trailing_csl = 1.0;      ///< worst trailing-window service level seen
};

/// Trailing window length and threshold of the spiral-down detector: the flag
/// raises when the achieved CSL over the last 28 periods drops more than 0.25
/// below target.
inline constexpr int kSpiralWindow = 28;
inline constexpr double kSpiralMargin = 0.25;

NewsvendorResult run_newsvendor(const NewsvendorConfig& config);

/**
 * @brief Synthetic fixture generators (also used to build the bundled CSVs).
 *
 * trend_seasonal: monthly-style series with additive trend and a 12-period
 * seasonal cycle; the bound rises linearly across a late in-sample window and
 * is +infinity elsewhere (values are returned unclipped; validate_series
 * clips). m5_like: daily demand with a weekly cycle, statistically similar to
 * a mid-volume retail aggregate.
 */
struct TrendSeasonalFixture {
    std::vector<double> values;  ///< true (uncensored) demand
    std::vector<double> bound;
    std::size_t split = 0;       ///< in-sample/holdout boundary
    int season_length = 12;
};

TrendSeasonalFixture make_trend_seasonal_fixture(std::uint64_t seed);

std::vector<double> make_m5_like_demand(std::uint64_t seed, int n_obs);

}  // namespace tets
