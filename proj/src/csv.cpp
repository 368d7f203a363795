#include "tets/csv.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

namespace tets {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream stream(line);
    while (std::getline(stream, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::string strip(const std::string& text) {
    const auto begin = text.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = text.find_last_not_of(" \t\r");
    return text.substr(begin, end - begin + 1);
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open output file: " + path);
    }
    return out;
}

}  // namespace

double parse_double(const std::string& cell) {
    const std::string text = strip(cell);
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || text.empty()) {
        throw parse_error("not a number: '" + cell + "'");
    }
    return value;
}

std::string format_double(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buffer[32];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    (void)ec;
    return std::string(buffer, ptr);
}

SeriesFile read_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw parse_error("cannot open series file: " + path);
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw parse_error(path + ": empty file");
    }
    const std::vector<std::string> header = split_line(line);
    const bool has_bound = header.size() == 3 && strip(header[2]) == "bound";
    if (!(header.size() == 2 || has_bound) || strip(header[0]) != "timestamp" ||
        strip(header[1]) != "value") {
        throw parse_error(path + ": header must be 'timestamp,value[,bound]'");
    }

    SeriesFile file;
    file.has_bound = has_bound;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (strip(line).empty()) continue;
        const std::vector<std::string> cells = split_line(line);
        if (cells.size() != header.size()) {
            throw parse_error(path + ":" + std::to_string(line_no) +
                              ": expected " + std::to_string(header.size()) + " columns");
        }
        file.timestamps.push_back(strip(cells[0]));
        try {
            file.values.push_back(parse_double(cells[1]));
            const std::string bound_cell = has_bound ? strip(cells[2]) : "";
            if (bound_cell.empty() || bound_cell == "inf" || bound_cell == "+inf") {
                file.bound.push_back(std::numeric_limits<double>::infinity());
            } else {
                file.bound.push_back(parse_double(bound_cell));
            }
        } catch (const parse_error& err) {
            throw parse_error(path + ":" + std::to_string(line_no) + ": " + err.what());
        }
    }
    if (file.values.empty()) {
        throw parse_error(path + ": no data rows");
    }
    return file;
}

void write_series_csv(const std::string& path, const SeriesFile& file) {
    std::ofstream out = open_output(path);
    out << (file.has_bound ? "timestamp,value,bound\n" : "timestamp,value\n");
    for (std::size_t i = 0; i < file.values.size(); ++i) {
        out << file.timestamps[i] << ',' << format_double(file.values[i]);
        if (file.has_bound) out << ',' << format_double(file.bound[i]);
        out << '\n';
    }
}

void write_forecast_csv(const std::string& path, const ForecastResult& result) {
    std::ofstream out = open_output(path);
    out << "step,mean,variance";
    for (double level : result.levels) {
        out << ",lo_" << format_double(level) << ",hi_" << format_double(level);
    }
    out << '\n';
    for (int j = 0; j < result.horizon; ++j) {
        out << (j + 1) << ',' << format_double(result.mean[j]) << ','
            << format_double(result.variance[j]);
        for (std::size_t i = 0; i < result.levels.size(); ++i) {
            out << ',' << format_double(result.lower[i][j]) << ','
                << format_double(result.upper[i][j]);
        }
        out << '\n';
    }
}

void write_table1_summary_csv(const std::string& path, const Table1Result& result) {
    std::ofstream out = open_output(path);
    out << "censor_level,method,rmse,bias,sd_bias\n";
    for (const auto& row : result.summary) {
        out << format_double(row.censor_level) << ',' << row.method << ','
            << format_double(row.rmse) << ',' << format_double(row.bias) << ','
            << format_double(row.sd_bias) << '\n';
    }
}

void write_table1_replicates_csv(const std::string& path, const Table1Result& result) {
    std::ofstream out = open_output(path);
    out << "replicate,censor_level,method,rmse,bias,sd_bias\n";
    for (const auto& row : result.replicates) {
        out << row.replicate << ',' << format_double(row.censor_level) << ','
            << row.method << ',' << format_double(row.rmse) << ','
            << format_double(row.bias) << ',' << format_double(row.sd_bias) << '\n';
    }
}

void write_trend_seasonal_csv(const std::string& path, const TrendSeasonalReport& report) {
    std::ofstream out = open_output(path);
    out << "step,actual,forecast_ets,forecast_tets\n";
    for (std::size_t j = 0; j < report.actual.size(); ++j) {
        out << (j + 1) << ',' << format_double(report.actual[j]) << ','
            << format_double(report.forecast_ets[j]) << ','
            << format_double(report.forecast_tets[j]) << '\n';
    }
}

void write_newsvendor_log_csv(const std::string& path, const NewsvendorResult& result) {
    std::ofstream out = open_output(path);
    out << "t,demand,forecast,sigma,order_up_to,sales,censored\n";
    for (const auto& period : result.log) {
        out << period.t << ',' << format_double(period.demand) << ','
            << format_double(period.forecast) << ',' << format_double(period.sigma)
            << ',' << format_double(period.order_up_to) << ','
            << format_double(period.sales) << ',' << (period.censored ? 1 : 0) << '\n';
    }
}

void write_newsvendor_summary_csv(const std::string& path, const std::string& label,
                                  double target_csl, const NewsvendorResult& result) {
    std::ofstream out = open_output(path);
    out << "forecaster,target_csl,n,rmse,me,lost_sales,excess_stock,achieved_csl,"
           "spiral_down,spiral_down_at,min_trailing_csl\n";
    out << label << ',' << format_double(target_csl) << ',' << result.report.n << ','
        << format_double(result.report.rmse) << ',' << format_double(result.report.me)
        << ',' << format_double(result.report.lost_sales) << ','
        << format_double(result.report.excess_stock) << ','
        << format_double(result.report.achieved_csl) << ','
        << (result.spiral_down ? 1 : 0) << ',' << result.spiral_down_at << ','
        << format_double(result.min_trailing_csl) << '\n';
}

}  // namespace tets
