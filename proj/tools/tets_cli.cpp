// Command-line surface: fit | forecast | simulate over series CSV files.
// Exit codes: 0 success, 1 usage, 2 input parsing, 3 numeric/estimation.
//
// Every run that writes artifacts also writes "<out>.run", a flat key=value
// snapshot of the effective options; --config replays such a file, with
// explicit command-line options taking precedence over the file.

#include <CLI11.hpp>
#include <json.hpp>

#include <cctype>
#include <charconv>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include "tets/csv.hpp"
#include "tets/estimation.hpp"
#include "tets/forecasting.hpp"
#include "tets/simulation.hpp"

namespace {

using nlohmann::json;

constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitNumeric = 3;

struct FitArgs {
    std::string config;
    std::string input;
    std::string family = "auto";
    int season = 0;
    std::string criterion = "aic";
    std::string out;
};

struct ForecastArgs {
    std::string config;
    std::string input;
    std::string model_file;
    std::string family = "auto";
    int season = 0;
    int horizon = 0;
    std::vector<double> levels;
    std::string criterion = "aic";
    std::string out;
};

struct SimulateArgs {
    std::string config;
    std::string case_name;
    std::string input;
    std::string out;
    std::uint64_t seed = 1;
    int replicates = 1000;
    std::size_t split = 120;
    int season = 0;
    int horizon = 10;
    int days = 365;
    double target_csl = 0.95;
    int refit_every = 7;
    int warmup = 35;
};

// ---------------------------------------------------------------------------
// Flat key=value run files.

std::map<std::string, std::string> load_runconfig(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw tets::parse_error("cannot open runconfig: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw tets::parse_error(path + ":" + std::to_string(line_no) +
                                    ": expected key=value");
        }
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

void write_runconfig(const std::string& out,
                     const std::vector<std::pair<std::string, std::string>>& entries) {
    const std::string path = out + ".run";
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot write runconfig: " + path);
    for (const auto& [key, value] : entries) file << key << '=' << value << '\n';
}

int parse_config_int(const std::string& key, const std::string& value) {
    int out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw tets::parse_error("runconfig: bad integer for '" + key + "': " + value);
    }
    return out;
}

std::uint64_t parse_config_u64(const std::string& key, const std::string& value) {
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw tets::parse_error("runconfig: bad integer for '" + key + "': " + value);
    }
    return out;
}

double parse_config_double(const std::string& key, const std::string& value) {
    try {
        return tets::parse_double(value);
    } catch (const tets::parse_error&) {
        throw tets::parse_error("runconfig: bad number for '" + key + "': " + value);
    }
}

std::vector<double> parse_config_levels(const std::string& value) {
    std::vector<double> out;
    if (value.empty()) return out;
    std::stringstream stream(value);
    std::string cell;
    while (std::getline(stream, cell, ',')) {
        out.push_back(parse_config_double("levels", cell));
    }
    return out;
}

std::string join_levels(const std::vector<double>& levels) {
    std::string out;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (i) out += ',';
        out += tets::format_double(levels[i]);
    }
    return out;
}

/// True when the option was given explicitly on the command line (such values
/// outrank runconfig entries).
bool given(const CLI::App* cmd, const std::string& name) {
    return cmd->count(name) > 0;
}

void merge_fit_config(FitArgs& args, const CLI::App* cmd) {
    for (const auto& [key, value] : load_runconfig(args.config)) {
        if (key == "input") {
            if (!given(cmd, "--input")) args.input = value;
        } else if (key == "family") {
            if (!given(cmd, "--family")) args.family = value;
        } else if (key == "season") {
            if (!given(cmd, "--season")) args.season = parse_config_int(key, value);
        } else if (key == "criterion") {
            if (!given(cmd, "--criterion")) args.criterion = value;
        } else if (key == "out") {
            if (!given(cmd, "--out")) args.out = value;
        } else {
            throw tets::parse_error("runconfig: unknown key '" + key + "'");
        }
    }
}

void merge_forecast_config(ForecastArgs& args, const CLI::App* cmd) {
    for (const auto& [key, value] : load_runconfig(args.config)) {
        if (key == "input") {
            if (!given(cmd, "--input")) args.input = value;
        } else if (key == "model") {
            if (!given(cmd, "--model")) args.model_file = value;
        } else if (key == "family") {
            if (!given(cmd, "--family")) args.family = value;
        } else if (key == "season") {
            if (!given(cmd, "--season")) args.season = parse_config_int(key, value);
        } else if (key == "horizon") {
            if (!given(cmd, "--horizon")) args.horizon = parse_config_int(key, value);
        } else if (key == "levels") {
            if (!given(cmd, "--levels")) args.levels = parse_config_levels(value);
        } else if (key == "criterion") {
            if (!given(cmd, "--criterion")) args.criterion = value;
        } else if (key == "out") {
            if (!given(cmd, "--out")) args.out = value;
        } else {
            throw tets::parse_error("runconfig: unknown key '" + key + "'");
        }
    }
}

void merge_simulate_config(SimulateArgs& args, const CLI::App* cmd) {
    for (const auto& [key, value] : load_runconfig(args.config)) {
        if (key == "case") {
            if (!given(cmd, "--case")) args.case_name = value;
        } else if (key == "input") {
            if (!given(cmd, "--input")) args.input = value;
        } else if (key == "out") {
            if (!given(cmd, "--out")) args.out = value;
        } else if (key == "seed") {
            if (!given(cmd, "--seed")) args.seed = parse_config_u64(key, value);
        } else if (key == "replicates") {
            if (!given(cmd, "--replicates")) args.replicates = parse_config_int(key, value);
        } else if (key == "split") {
            if (!given(cmd, "--split"))
                args.split = static_cast<std::size_t>(parse_config_u64(key, value));
        } else if (key == "season") {
            if (!given(cmd, "--season")) args.season = parse_config_int(key, value);
        } else if (key == "horizon") {
            if (!given(cmd, "--horizon")) args.horizon = parse_config_int(key, value);
        } else if (key == "days") {
            if (!given(cmd, "--days")) args.days = parse_config_int(key, value);
        } else if (key == "target_csl") {
            if (!given(cmd, "--target-csl")) args.target_csl = parse_config_double(key, value);
        } else if (key == "refit_every") {
            if (!given(cmd, "--refit-every")) args.refit_every = parse_config_int(key, value);
        } else if (key == "warmup") {
            if (!given(cmd, "--warmup")) args.warmup = parse_config_int(key, value);
        } else {
            throw tets::parse_error("runconfig: unknown key '" + key + "'");
        }
    }
}

int usage_error(const std::string& message) {
    std::cerr << message << "\nRun with --help for more information.\n";
    return kExitUsage;
}

// ---------------------------------------------------------------------------

std::vector<std::pair<tets::Family, int>> candidates_for(const std::string& family,
                                                         int season) {
    if (family != "auto") {
        const tets::Family f = tets::family_from_string(family);
        return {{f, tets::has_seasonal(f) ? season : 0}};
    }
    std::vector<std::pair<tets::Family, int>> out = {{tets::Family::ANN, 0},
                                                     {tets::Family::AAN, 0}};
    if (season >= 2) {
        out.emplace_back(tets::Family::ANA, season);
        out.emplace_back(tets::Family::AAA, season);
    }
    return out;
}

json fit_to_json(const tets::FitResult& fit) {
    json j;
    j["family"] = tets::to_string(fit.model.family);
    j["season_length"] = fit.model.season_length;
    j["alpha"] = fit.model.params.alpha;
    if (tets::has_trend(fit.model.family)) j["beta"] = fit.model.params.beta;
    if (tets::has_seasonal(fit.model.family)) j["gamma"] = fit.model.params.gamma;
    j["sigma2"] = fit.model.sigma2;
    j["x1"] = std::vector<double>(fit.x1.data(), fit.x1.data() + fit.x1.size());
    j["init_mode"] =
        fit.init_mode == tets::InitMode::diffuse ? "diffuse" : "deterministic";
    j["loglik"] = fit.loglik;
    j["n_params"] = fit.n_params;
    j["aic"] = fit.aic;
    j["bic"] = fit.bic;
    j["converged"] = fit.converged;
    return j;
}

tets::FitResult fit_from_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw tets::parse_error("cannot open model file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& err) {
        throw tets::parse_error(path + ": " + err.what());
    }
    try {
        tets::FitResult fit;
        tets::SmoothingParams params;
        params.alpha = j.at("alpha").get<double>();
        params.beta = j.value("beta", 0.0);
        params.gamma = j.value("gamma", 0.0);
        const tets::Family family = tets::family_from_string(j.at("family").get<std::string>());
        fit.model = tets::build_model(family, j.value("season_length", 0), params,
                                      j.at("sigma2").get<double>());
        const std::vector<double> x1 = j.at("x1").get<std::vector<double>>();
        fit.x1 = Eigen::Map<const Eigen::VectorXd>(x1.data(), x1.size());
        fit.init_mode = j.at("init_mode").get<std::string>() == "deterministic"
                            ? tets::InitMode::deterministic
                            : tets::InitMode::diffuse;
        fit.loglik = j.value("loglik", 0.0);
        fit.n_params = j.value("n_params", 0);
        return fit;
    } catch (const json::exception& err) {
        throw tets::parse_error(path + ": " + err.what());
    }
}

void print_fit_report(const tets::FitResult& fit, std::size_t n_obs) {
    std::cout << "family        " << tets::to_string(fit.model.family);
    if (tets::has_seasonal(fit.model.family)) {
        std::cout << " (s=" << fit.model.season_length << ")";
    }
    std::cout << "\ninit_mode     "
              << (fit.init_mode == tets::InitMode::diffuse ? "diffuse" : "deterministic")
              << "\nn_obs         " << n_obs << "\nalpha         "
              << tets::format_double(fit.model.params.alpha) << '\n';
    if (tets::has_trend(fit.model.family)) {
        std::cout << "beta          " << tets::format_double(fit.model.params.beta) << '\n';
    }
    if (tets::has_seasonal(fit.model.family)) {
        std::cout << "gamma         " << tets::format_double(fit.model.params.gamma) << '\n';
    }
    std::cout << "sigma         " << tets::format_double(fit.model.sigma()) << "\nx1          ";
    for (Eigen::Index i = 0; i < fit.x1.size(); ++i) {
        std::cout << ' ' << tets::format_double(fit.x1(i));
    }
    std::cout << "\nloglik        " << tets::format_double(fit.loglik) << "\nn_params      "
              << fit.n_params << "\naic           " << tets::format_double(fit.aic)
              << "\nbic           " << tets::format_double(fit.bic) << "\nconverged     "
              << (fit.converged ? "yes" : "no") << " (" << fit.n_evals << " evals)\n";
    if (!fit.at_boundary.empty()) {
        std::cout << "at_boundary  ";
        for (const auto& name : fit.at_boundary) std::cout << ' ' << name;
        std::cout << '\n';
    }
}

int run_fit(const FitArgs& args) {
    const tets::SeriesFile file = tets::read_series_csv(args.input);
    const tets::CensoredSeries series = file.to_series();
    const tets::Criterion criterion =
        args.criterion == "bic" ? tets::Criterion::bic : tets::Criterion::aic;
    const tets::FitResult fit =
        tets::select_model(series, candidates_for(args.family, args.season), criterion);
    print_fit_report(fit, series.size());
    if (!args.out.empty()) {
        std::ofstream out(args.out);
        if (!out) throw std::runtime_error("cannot open output file: " + args.out);
        out << fit_to_json(fit).dump(2) << '\n';
        write_runconfig(args.out, {{"input", args.input},
                                   {"family", args.family},
                                   {"season", std::to_string(args.season)},
                                   {"criterion", args.criterion},
                                   {"out", args.out}});
    }
    return 0;
}

int run_forecast(const ForecastArgs& args) {
    const tets::SeriesFile file = tets::read_series_csv(args.input);
    const tets::CensoredSeries series = file.to_series();

    tets::FitResult fit;
    if (!args.model_file.empty()) {
        fit = fit_from_json(args.model_file);
    } else {
        const tets::Criterion criterion =
            args.criterion == "bic" ? tets::Criterion::bic : tets::Criterion::aic;
        fit = tets::select_model(series, candidates_for(args.family, args.season), criterion);
    }

    const Eigen::VectorXd origin = tets::forecast_origin(fit, series);
    const tets::ForecastResult fc =
        tets::forecast(fit.model, origin, args.horizon, args.levels);
    if (args.out.empty()) {
        std::cout << "step,mean,variance";
        for (double level : fc.levels) {
            std::cout << ",lo_" << tets::format_double(level) << ",hi_"
                      << tets::format_double(level);
        }
        std::cout << '\n';
        for (int j = 0; j < fc.horizon; ++j) {
            std::cout << (j + 1) << ',' << tets::format_double(fc.mean[j]) << ','
                      << tets::format_double(fc.variance[j]);
            for (std::size_t i = 0; i < fc.levels.size(); ++i) {
                std::cout << ',' << tets::format_double(fc.lower[i][j]) << ','
                          << tets::format_double(fc.upper[i][j]);
            }
            std::cout << '\n';
        }
    } else {
        tets::write_forecast_csv(args.out, fc);
        write_runconfig(args.out, {{"input", args.input},
                                   {"model", args.model_file},
                                   {"family", args.family},
                                   {"season", std::to_string(args.season)},
                                   {"horizon", std::to_string(args.horizon)},
                                   {"levels", join_levels(args.levels)},
                                   {"criterion", args.criterion},
                                   {"out", args.out}});
    }
    return 0;
}

int run_simulate(const SimulateArgs& args) {
    if (args.case_name == "table1") {
        tets::MonteCarloConfig config;
        config.n_series = args.replicates;
        config.horizon = args.horizon;
        config.seed = args.seed;
        const std::vector<double> levels = {std::numeric_limits<double>::infinity(),
                                            120.0, 100.0, 90.0};
        const tets::Table1Result result = tets::run_table1(config, levels);
        tets::write_table1_summary_csv(args.out + "_summary.csv", result);
        tets::write_table1_replicates_csv(args.out + "_replicates.csv", result);
        std::cout << "censor_level,method,rmse,bias,sd_bias\n";
        for (const auto& row : result.summary) {
            std::cout << tets::format_double(row.censor_level) << ',' << row.method
                      << ',' << tets::format_double(row.rmse) << ','
                      << tets::format_double(row.bias) << ','
                      << tets::format_double(row.sd_bias) << '\n';
        }
    } else if (args.case_name == "trend_seasonal") {
        const tets::SeriesFile file = tets::read_series_csv(args.input);
        const int season = args.season >= 2 ? args.season : 12;
        const tets::TrendSeasonalReport report =
            tets::run_trend_seasonal_case(file.to_series(), args.split, season);
        tets::write_trend_seasonal_csv(args.out + "_forecasts.csv", report);
        std::cout << "method,me,rmse\nETS," << tets::format_double(report.me_ets) << ','
                  << tets::format_double(report.rmse_ets) << "\nTETS,"
                  << tets::format_double(report.me_tets) << ','
                  << tets::format_double(report.rmse_tets) << '\n';
    } else {  // newsvendor
        std::vector<double> demand;
        if (!args.input.empty()) {
            demand = tets::read_series_csv(args.input).values;
        } else {
            demand = tets::make_m5_like_demand(args.seed, args.days);
        }
        tets::NewsvendorConfig config;
        config.demand = demand;
        config.target_csl = args.target_csl;
        config.refit_every = args.refit_every;
        config.warmup = args.warmup;
        config.season_length = args.season >= 2 ? args.season : 7;
        config.seed = args.seed;
        std::cout << "forecaster,achieved_csl,lost_sales,excess_stock,spiral_down\n";
        for (const tets::Forecaster forecaster :
             {tets::Forecaster::ETS, tets::Forecaster::TETS}) {
            config.forecaster = forecaster;
            const tets::NewsvendorResult result = tets::run_newsvendor(config);
            const std::string label = tets::to_string(forecaster);
            std::string suffix = label;
            for (char& ch : suffix) ch = static_cast<char>(std::tolower(ch));
            const std::string prefix = args.out + "_" + suffix;
            tets::write_newsvendor_log_csv(prefix + "_log.csv", result);
            tets::write_newsvendor_summary_csv(prefix + "_summary.csv", label,
                                               args.target_csl, result);
            std::cout << label << ',' << tets::format_double(result.report.achieved_csl)
                      << ',' << tets::format_double(result.report.lost_sales) << ','
                      << tets::format_double(result.report.excess_stock) << ','
                      << (result.spiral_down ? 1 : 0) << '\n';
        }
    }
    write_runconfig(args.out, {{"case", args.case_name},
                               {"input", args.input},
                               {"seed", std::to_string(args.seed)},
                               {"replicates", std::to_string(args.replicates)},
                               {"split", std::to_string(args.split)},
                               {"season", std::to_string(args.season)},
                               {"horizon", std::to_string(args.horizon)},
                               {"days", std::to_string(args.days)},
                               {"target_csl", tets::format_double(args.target_csl)},
                               {"refit_every", std::to_string(args.refit_every)},
                               {"warmup", std::to_string(args.warmup)},
                               {"out", args.out}});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exponential smoothing with Tobit censoring: fit, forecast, simulate"};
    app.require_subcommand(1);

    FitArgs fit_args;
    CLI::App* fit_cmd = app.add_subcommand("fit", "Estimate a model from a series CSV");
    fit_cmd->add_option("--config", fit_args.config, "replay a saved key=value run file");
    fit_cmd->add_option("--input", fit_args.input, "series CSV (timestamp,value[,bound])");
    fit_cmd->add_option("--family", fit_args.family, "ANN|AAN|ANA|AAA|auto")
        ->check(CLI::IsMember({"ANN", "AAN", "AAA", "auto"}));
    fit_cmd->add_option("--season", fit_args.season, "season length (AAA)");
    fit_cmd->add_option("--criterion", fit_args.criterion, "model selection criterion")
        ->check(CLI::IsMember({"aic", "bic"}));
    fit_cmd->add_option("--out", fit_args.out, "write the fitted model as JSON");

    ForecastArgs fc_args;
    CLI::App* fc_cmd = app.add_subcommand("forecast", "Forecast from a fit or model file");
    fc_cmd->add_option("--config", fc_args.config, "replay a saved key=value run file");
    fc_cmd->add_option("--input", fc_args.input, "series CSV");
    fc_cmd->add_option("--horizon", fc_args.horizon, "steps ahead");
    fc_cmd->add_option("--model", fc_args.model_file, "fitted model JSON (skips estimation)");
    fc_cmd->add_option("--family", fc_args.family, "ANN|AAN|ANA|AAA|auto")
        ->check(CLI::IsMember({"ANN", "AAN", "AAA", "auto"}));
    fc_cmd->add_option("--season", fc_args.season, "season length (AAA)");
    fc_cmd->add_option("--levels", fc_args.levels, "interval levels, e.g. 0.8,0.95")
        ->delimiter(',');
    fc_cmd->add_option("--criterion", fc_args.criterion, "model selection criterion")
        ->check(CLI::IsMember({"aic", "bic"}));
    fc_cmd->add_option("--out", fc_args.out, "forecast CSV path (stdout if omitted)");

    SimulateArgs sim_args;
    CLI::App* sim_cmd = app.add_subcommand("simulate", "Run a bundled case study");
    sim_cmd->add_option("--config", sim_args.config, "replay a saved key=value run file");
    sim_cmd->add_option("--case", sim_args.case_name, "table1|trend_seasonal|newsvendor")
        ->check(CLI::IsMember({"table1", "trend_seasonal", "newsvendor"}));
    sim_cmd->add_option("--out", sim_args.out, "output file prefix");
    sim_cmd->add_option("--input", sim_args.input, "series CSV (trend_seasonal, newsvendor)");
    sim_cmd->add_option("--seed", sim_args.seed, "master seed");
    sim_cmd->add_option("--replicates", sim_args.replicates, "table1 replicate count");
    sim_cmd->add_option("--split", sim_args.split, "trend_seasonal in-sample length");
    sim_cmd->add_option("--season", sim_args.season, "season length");
    sim_cmd->add_option("--horizon", sim_args.horizon, "table1 forecast horizon");
    sim_cmd->add_option("--days", sim_args.days, "newsvendor generated-demand length");
    sim_cmd->add_option("--target-csl", sim_args.target_csl, "newsvendor service target");
    sim_cmd->add_option("--refit-every", sim_args.refit_every, "newsvendor refit cadence");
    sim_cmd->add_option("--warmup", sim_args.warmup, "newsvendor warmup periods");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (fit_cmd->parsed()) {
            if (!fit_args.config.empty()) merge_fit_config(fit_args, fit_cmd);
            if (fit_args.input.empty()) return usage_error("--input is required");
            return run_fit(fit_args);
        }
        if (fc_cmd->parsed()) {
            if (!fc_args.config.empty()) merge_forecast_config(fc_args, fc_cmd);
            if (fc_args.input.empty()) return usage_error("--input is required");
            if (fc_args.horizon < 1) return usage_error("--horizon must be at least 1");
            return run_forecast(fc_args);
        }
        if (!sim_args.config.empty()) merge_simulate_config(sim_args, sim_cmd);
        if (sim_args.case_name.empty()) return usage_error("--case is required");
        if (sim_args.out.empty()) return usage_error("--out is required");
        if (sim_args.case_name == "trend_seasonal" && sim_args.input.empty()) {
            return usage_error("--input is required for the trend_seasonal case");
        }
        return run_simulate(sim_args);
    } catch (const tets::parse_error& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitParse;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitNumeric;
    }
}
