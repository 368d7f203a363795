#include "tets/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tets {

double squash01(double u) {
    return std::clamp(1.0 / (1.0 + std::exp(-u)), 1e-6, 1.0 - 1e-6);
}

double unsquash01(double theta) {
    const double clamped = std::clamp(theta, 1e-6, 1.0 - 1e-6);
    return std::log(clamped / (1.0 - clamped));
}

namespace {

struct Simplex {
    std::vector<Eigen::VectorXd> x;
    std::vector<double> f;

    void sort() {
        const std::size_t m = x.size();
        std::vector<std::size_t> order(m);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [this](std::size_t a, std::size_t b) { return f[a] < f[b]; });
        std::vector<Eigen::VectorXd> xs(m);
        std::vector<double> fs(m);
        for (std::size_t i = 0; i < m; ++i) {
            xs[i] = x[order[i]];
            fs[i] = f[order[i]];
        }
        x = std::move(xs);
        f = std::move(fs);
    }
};

Simplex initial_simplex(const std::function<double(const Eigen::VectorXd&)>& objective,
                        const Eigen::VectorXd& start, int& n_evals) {
    const int dim = static_cast<int>(start.size());
    Simplex s;
    s.x.reserve(dim + 1);
    s.x.push_back(start);
    for (int i = 0; i < dim; ++i) {
        Eigen::VectorXd v = start;
        v(i) += (std::abs(v(i)) > 1e-8) ? 0.05 * std::abs(v(i)) : 0.1;
        s.x.push_back(std::move(v));
    }
    s.f.reserve(dim + 1);
    for (const auto& v : s.x) {
        s.f.push_back(objective(v));
        ++n_evals;
    }
    s.sort();
    return s;
}

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                             const Eigen::VectorXd& start,
                             const NelderMeadOptions& options) {
    if (start.size() == 0) {
        throw std::invalid_argument("nelder_mead: empty start vector");
    }
    const int dim = static_cast<int>(start.size());
    constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;

    NelderMeadResult result;
    result.x = start;
    result.fmin = std::numeric_limits<double>::infinity();

    Simplex s = initial_simplex(objective, start, result.n_evals);
    int restarts_left = 3;

    while (result.n_evals < options.max_evals) {
        const double f_spread = s.f[dim] - s.f[0];
        double x_spread = 0.0;
        for (int i = 1; i <= dim; ++i) {
            x_spread = std::max(x_spread, (s.x[i] - s.x[0]).cwiseAbs().maxCoeff());
        }
        if (f_spread < options.ftol && x_spread < options.xtol) {
            const double previous_best = result.fmin;
            if (s.f[0] < result.fmin) {
                result.fmin = s.f[0];
                result.x = s.x[0];
            }
            // Rebuild the simplex at the incumbent unless the last restart
            // brought no improvement beyond the objective tolerance.
            if (restarts_left-- > 0 && previous_best - result.fmin > options.ftol &&
                result.n_evals + dim + 1 <= options.max_evals) {
                s = initial_simplex(objective, result.x, result.n_evals);
                continue;
            }
            result.converged = true;
            break;
        }

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
        for (int i = 0; i < dim; ++i) centroid += s.x[i];
        centroid /= dim;

        const Eigen::VectorXd reflected = centroid + kReflect * (centroid - s.x[dim]);
        const double f_reflected = objective(reflected);
        ++result.n_evals;

        if (f_reflected < s.f[0]) {
            const Eigen::VectorXd expanded = centroid + kExpand * (reflected - centroid);
            const double f_expanded = objective(expanded);
            ++result.n_evals;
            if (f_expanded < f_reflected) {
                s.x[dim] = expanded;
                s.f[dim] = f_expanded;
            } else {
                s.x[dim] = reflected;
                s.f[dim] = f_reflected;
            }
        } else if (f_reflected < s.f[dim - 1]) {
            s.x[dim] = reflected;
            s.f[dim] = f_reflected;
        } else {
            const bool outside = f_reflected < s.f[dim];
            const Eigen::VectorXd& pivot = outside ? reflected : s.x[dim];
            const Eigen::VectorXd contracted = centroid + kContract * (pivot - centroid);
            const double f_contracted = objective(contracted);
            ++result.n_evals;
            if (f_contracted < std::min(f_reflected, s.f[dim])) {
                s.x[dim] = contracted;
                s.f[dim] = f_contracted;
            } else {
                for (int i = 1; i <= dim; ++i) {
                    s.x[i] = s.x[0] + kShrink * (s.x[i] - s.x[0]);
                    s.f[i] = objective(s.x[i]);
                    ++result.n_evals;
                }
            }
        }
        s.sort();
        if (s.f[0] < result.fmin) {
            result.fmin = s.f[0];
            result.x = s.x[0];
        }
        result.trace.push_back(result.fmin);
    }

    if (s.f[0] < result.fmin) {
        result.fmin = s.f[0];
        result.x = s.x[0];
    }
    result.trace.push_back(result.fmin);
    return result;
}

}  // namespace tets
