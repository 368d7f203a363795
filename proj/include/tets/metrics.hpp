#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace tets {

/// Root mean squared error of forecasts against actuals (equal, non-empty lengths).
double rmse(const std::vector<double>& forecasts, const std::vector<double>& actuals);

/// Mean error (signed bias), forecast minus actual: positive means over-forecasting.
double me(const std::vector<double>& forecasts, const std::vector<double>& actuals);

/// Inventory outcomes of serving `demand` with per-period availability `order_up_to`.
struct InventoryKpis {
    double lost_sales = 0.0;    ///< sum of max(demand - order_up_to, 0)
    double excess_stock = 0.0;  ///< sum of max(order_up_to - demand, 0)
    double achieved_csl = 0.0;  ///< fraction of periods with demand <= order_up_to
};

InventoryKpis inventory_kpis(const std::vector<double>& demand,
                             const std::vector<double>& order_up_to);

/**
 * @brief Aggregate evaluation row used by the simulation harnesses.
 *
 * sd_bias (estimated sigma minus true sigma) is only meaningful when the true
 * sigma is known, i.e. in simulation studies — it is absent, not zero,
 * elsewhere. Inventory fields are zero for pure forecasting evaluations.
 */
struct EvalReport {
    double rmse = 0.0;
    double me = 0.0;
    std::optional<double> sd_bias;
    double lost_sales = 0.0;
    double excess_stock = 0.0;
    double achieved_csl = 0.0;
    std::size_t n = 0;
};

}  // namespace tets
