#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "tets/forecasting.hpp"
#include "tets/model.hpp"
#include "tets/simulation.hpp"

namespace tets {

/// Input-file problems (malformed CSV, bad numbers); distinct from numeric
/// failures so the CLI can map them to its own exit code.
struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/**
 * @brief Raw series file: header `timestamp,value[,bound]`.
 *
 * Timestamps are carried through untouched (never interpreted). A blank or
 * "inf" bound cell means +infinity; an absent bound column means the series
 * is uncensored.
 */
struct SeriesFile {
    std::vector<std::string> timestamps;
    std::vector<double> values;
    std::vector<double> bound;
    bool has_bound = false;

    CensoredSeries to_series() const { return validate_series(values, bound); }
};

/// Parses a series CSV. Throws parse_error with the offending line number.
SeriesFile read_series_csv(const std::string& path);

void write_series_csv(const std::string& path, const SeriesFile& file);

/// Shortest decimal form that parses back to exactly the same double
/// (infinities encode as "inf" / "-inf").
std::string format_double(double value);

/// Strict double parser for CSV cells; "" is not a number. Throws parse_error.
double parse_double(const std::string& cell);

void write_forecast_csv(const std::string& path, const ForecastResult& result);

void write_table1_summary_csv(const std::string& path, const Table1Result& result);
void write_table1_replicates_csv(const std::string& path, const Table1Result& result);

void write_trend_seasonal_csv(const std::string& path, const TrendSeasonalReport& report);

void write_newsvendor_log_csv(const std::string& path, const NewsvendorResult& result);
/// One summary row; `label` names the forecaster column.
void write_newsvendor_summary_csv(const std::string& path, const std::string& label,
                                  double target_csl, const NewsvendorResult& result);

}  // namespace tets
