#include "tets/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>

namespace tets {

namespace {

int n_smoothing(Family family) {
    return 1 + (has_trend(family) ? 1 : 0) + (has_seasonal(family) ? 1 : 0);
}

/// Maps unconstrained optimizer coordinates into the classical usable
/// region 0 < beta < alpha < 1, 0 < gamma < 1 - alpha. The plain [0,1] box
/// admits degenerate short-sample optima (a large beta with alpha near zero
/// reads pure noise as a steep trend); the nested region rules those out
/// while keeping every conventionally sensible parameterization reachable.
SmoothingParams unpack_params(Family family, const Eigen::VectorXd& u) {
    SmoothingParams p;
    p.alpha = squash01(u(0));
    int i = 1;
    if (has_trend(family)) p.beta = p.alpha * squash01(u(i++));
    if (has_seasonal(family)) p.gamma = (1.0 - p.alpha) * squash01(u(i));
    return p;
}

/// Inverse of unpack_params for building start vectors; ratios are clamped
/// away from the edges so out-of-region starts stay finite.
Eigen::VectorXd pack_params(Family family, const SmoothingParams& p) {
    const auto clamp_ratio = [](double r) { return std::clamp(r, 1e-4, 1.0 - 1e-4); };
    Eigen::VectorXd u(n_smoothing(family));
    u(0) = unsquash01(p.alpha);
    int i = 1;
    if (has_trend(family)) {
        u(i++) = unsquash01(clamp_ratio(p.beta / std::max(p.alpha, 1e-12)));
    }
    if (has_seasonal(family)) {
        u(i) = unsquash01(clamp_ratio(p.gamma / std::max(1.0 - p.alpha, 1e-12)));
    }
    return u;
}

/// Standard deviation of first differences of the uncensored observations
/// (all observations when fewer than two are uncensored).
double default_start_sigma(const CensoredSeries& series) {
    std::vector<double> kept;
    kept.reserve(series.size());
    for (std::size_t t = 0; t < series.size(); ++t) {
        if (!series.is_censored[t]) kept.push_back(series.values[t]);
    }
    if (kept.size() < 2) kept = series.values;
    double mean = 0.0;
    std::vector<double> diffs(kept.size() - 1);
    for (std::size_t i = 0; i + 1 < kept.size(); ++i) {
        diffs[i] = kept[i + 1] - kept[i];
        mean += diffs[i];
    }
    mean /= static_cast<double>(diffs.size());
    double ss = 0.0;
    for (double d : diffs) ss += (d - mean) * (d - mean);
    const double sd = diffs.size() > 1 ? std::sqrt(ss / (diffs.size() - 1)) : 0.0;
    return (std::isfinite(sd) && sd > 0.0) ? sd : 1.0;
}

/// Heuristic seed state: level = mean of the first season (first few
/// observations for non-seasonal families), zero trend, and the first
/// season's deviations — reversed into the state layout, newest slot first.
Eigen::VectorXd default_start_x1(const CensoredSeries& series, Family family,
                                 int season_length) {
    const int n_states = state_count(family, season_length);
    Eigen::VectorXd x1 = Eigen::VectorXd::Zero(n_states);
    const std::size_t window = has_seasonal(family)
                                   ? static_cast<std::size_t>(season_length)
                                   : std::min<std::size_t>(series.size(), 6);
    double level = 0.0;
    for (std::size_t i = 0; i < window; ++i) level += series.values[i];
    level /= static_cast<double>(window);
    x1(0) = level;
    if (has_seasonal(family)) {
        const int head = has_trend(family) ? 2 : 1;
        for (int j = 0; j < season_length; ++j) {
            x1(head + j) = series.values[season_length - 1 - j] - level;
        }
    }
    return x1;
}

/// A seasonal seed has one flat direction (a constant moved between level
/// and the seasonal block), so the optimizer sees s-1 free seasonal seeds
/// and the last is pinned to the negated sum.
int free_x1_size(Family family, int n_states) {
    return has_seasonal(family) ? n_states - 1 : n_states;
}

Eigen::VectorXd x1_from_free(Family family, int n_states, const Eigen::VectorXd& free) {
    if (!has_seasonal(family)) return free;
    const int head = has_trend(family) ? 2 : 1;
    Eigen::VectorXd x1(n_states);
    x1.head(n_states - 1) = free;
    x1(n_states - 1) = -free.tail(n_states - 1 - head).sum();
    return x1;
}

Eigen::VectorXd free_from_x1(Family family, int n_states, const Eigen::VectorXd& x1) {
    if (!has_seasonal(family)) return x1;
    // Shift the seasonal block to sum-zero form first so the representative
    // is unique; predictions are invariant to that shift.
    Eigen::VectorXd adjusted = x1;
    const int s = n_states - (has_trend(family) ? 2 : 1);
    const double shift = x1.tail(s).sum() / s;
    adjusted.tail(s).array() -= shift;
    adjusted(0) += shift;
    return adjusted.head(n_states - 1);
}

void flag_boundaries(Family family, const SmoothingParams& p, FitResult& result) {
    const auto near_edge = [](double v, double lo, double hi) {
        const double tol = 1e-4 * std::max(hi - lo, 1e-12);
        return v < lo + tol || v > hi - tol;
    };
    if (near_edge(p.alpha, 0.0, 1.0)) result.at_boundary.push_back("alpha");
    if (has_trend(family) && near_edge(p.beta, 0.0, p.alpha)) {
        result.at_boundary.push_back("beta");
    }
    if (has_seasonal(family) && near_edge(p.gamma, 0.0, 1.0 - p.alpha)) {
        result.at_boundary.push_back("gamma");
    }
}

void finish_criteria(FitResult& result, std::size_t n) {
    result.aic = -2.0 * result.loglik + 2.0 * result.n_params;
    result.bic = -2.0 * result.loglik + std::log(static_cast<double>(n)) * result.n_params;
}

constexpr double kFailedObjective = 1e30;

}  // namespace

FitResult fit(const CensoredSeries& series, Family family, int season_length,
              const FitOptions& options) {
    if (!has_seasonal(family)) season_length = 0;
    const int n_states = state_count(family, season_length);
    if (has_seasonal(family) && season_length < 2) {
        throw std::invalid_argument("fit: " + to_string(family) +
                                    " requires season_length >= 2");
    }
    if (static_cast<int>(series.size()) < n_states + 2) {
        throw std::invalid_argument("fit: series too short for the requested family");
    }

    const int k = n_smoothing(family);
    const SmoothingParams start = options.start_params.value_or(SmoothingParams{});
    const Eigen::VectorXd u0 = pack_params(family, start);

    const bool deterministic = series.any_censored() || options.force_deterministic;
    FitResult result;

    if (!deterministic) {
        const auto objective = [&](const Eigen::VectorXd& u) {
            try {
                const InnovationsModel m =
                    build_model(family, season_length, unpack_params(family, u), 1.0);
                return -akf_filter(m, series, false).loglik_diffuse;
            } catch (const std::exception&) {
                return kFailedObjective;
            }
        };
        const NelderMeadResult opt = nelder_mead(objective, u0, options.optimizer);

        const SmoothingParams p = unpack_params(family, opt.x);
        InnovationsModel model = build_model(family, season_length, p, 1.0);
        const AkfRun akf = akf_filter(model, series, false);
        model.sigma2 = akf.sigma2_hat;

        result.model = std::move(model);
        result.x1 = akf.x1_hat;
        result.loglik = akf.loglik_diffuse;
        result.n_params = k + 1;  // smoothing parameters + sigma2
        result.init_mode = InitMode::diffuse;
        result.converged = opt.converged;
        result.n_evals = opt.n_evals;
        result.optimizer_trace = opt.trace;
        flag_boundaries(family, p, result);
        finish_criteria(result, series.size());
        return result;
    }

    const int n_free = free_x1_size(family, n_states);
    const double sigma0 = options.start_sigma.value_or(default_start_sigma(series));
    Eigen::VectorXd x1_start =
        options.start_x1.value_or(default_start_x1(series, family, season_length));
    if (x1_start.size() != n_states) {
        throw std::invalid_argument("fit: start_x1 dimension mismatch");
    }

    Eigen::VectorXd v0(k + 1 + n_free);
    v0.head(k) = u0;
    v0(k) = std::log(sigma0);
    v0.tail(n_free) = free_from_x1(family, n_states, x1_start);

    const auto objective = [&](const Eigen::VectorXd& v) {
        try {
            const double sigma = std::exp(v(k));
            const InnovationsModel m = build_model(
                family, season_length, unpack_params(family, v.head(k)), sigma * sigma);
            const Eigen::VectorXd x1 = x1_from_free(family, n_states, v.tail(n_free));
            return -tobit_filter(m, series, x1).loglik;
        } catch (const std::exception&) {
            return kFailedObjective;
        }
    };
    const NelderMeadResult opt = nelder_mead(objective, v0, options.optimizer);

    const SmoothingParams p = unpack_params(family, opt.x.head(k));
    const double sigma_hat = std::exp(opt.x(k));
    // Report the variance in the same flavor as the diffuse path, which
    // divides its sum of squares by n minus the seeded state dimension;
    // the ML estimate divides by n. Without the rescale the two paths
    // disagree on small samples even when nothing is censored.
    const double df_scale = static_cast<double>(series.size()) /
                            static_cast<double>(series.size() - n_free);
    result.model = build_model(family, season_length, p, sigma_hat * sigma_hat * df_scale);
    result.x1 = x1_from_free(family, n_states, opt.x.tail(n_free));
    result.loglik = -opt.fmin;
    result.n_params = k + 1 + n_free;  // smoothing + sigma + free initial states
    result.init_mode = InitMode::deterministic;
    result.converged = opt.converged;
    result.n_evals = opt.n_evals;
    result.optimizer_trace = opt.trace;
    flag_boundaries(family, p, result);
    finish_criteria(result, series.size());
    return result;
}

FitResult select_model(const CensoredSeries& series,
                       const std::vector<std::pair<Family, int>>& candidates,
                       Criterion criterion, const FitOptions& options) {
    if (candidates.empty()) {
        throw std::invalid_argument("select_model: empty candidate list");
    }
    std::optional<FitResult> best;
    std::exception_ptr last_error;
    for (const auto& [family, season_length] : candidates) {
        FitResult candidate;
        try {
            candidate = fit(series, family, season_length, options);
        } catch (...) {
            last_error = std::current_exception();
            continue;
        }
        const auto score = [&](const FitResult& r) {
            return criterion == Criterion::aic ? r.aic : r.bic;
        };
        if (!best || score(candidate) < score(*best) ||
            (score(candidate) == score(*best) && candidate.n_params < best->n_params)) {
            best = std::move(candidate);
        }
    }
    if (!best) {
        if (last_error) std::rethrow_exception(last_error);
        throw std::runtime_error("select_model: all candidates failed");
    }
    return *best;
}

Eigen::VectorXd forecast_origin(const FitResult& fit, const CensoredSeries& series) {
    const FilterRun run = fit.init_mode == InitMode::deterministic
                              ? tobit_filter(fit.model, series, fit.x1)
                              : plain_filter(fit.model, series, fit.x1);
    return run.states.back();
}

}  // namespace tets
