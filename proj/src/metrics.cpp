#include "tets/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace tets {

namespace {

void check_lengths(const std::vector<double>& a, const std::vector<double>& b,
                   const char* where) {
    if (a.size() != b.size()) {
        throw std::invalid_argument(std::string(where) + ": length mismatch");
    }
    if (a.empty()) {
        throw std::invalid_argument(std::string(where) + ": empty input");
    }
}

}  // namespace

double rmse(const std::vector<double>& forecasts, const std::vector<double>& actuals) {
    check_lengths(forecasts, actuals, "rmse");
    double ss = 0.0;
    for (std::size_t i = 0; i < forecasts.size(); ++i) {
        const double e = forecasts[i] - actuals[i];
        ss += e * e;
    }
    return std::sqrt(ss / static_cast<double>(forecasts.size()));
}

double me(const std::vector<double>& forecasts, const std::vector<double>& actuals) {
    check_lengths(forecasts, actuals, "me");
    double sum = 0.0;
    for (std::size_t i = 0; i < forecasts.size(); ++i) {
        sum += forecasts[i] - actuals[i];
    }
    return sum / static_cast<double>(forecasts.size());
}

InventoryKpis inventory_kpis(const std::vector<double>& demand,
                             const std::vector<double>& order_up_to) {
    check_lengths(demand, order_up_to, "inventory_kpis");
    InventoryKpis kpis;
    std::size_t covered = 0;
    for (std::size_t i = 0; i < demand.size(); ++i) {
        const double gap = demand[i] - order_up_to[i];
        if (gap > 0.0) {
            kpis.lost_sales += gap;
        } else {
            kpis.excess_stock -= gap;
            ++covered;
        }
    }
    kpis.achieved_csl = static_cast<double>(covered) / static_cast<double>(demand.size());
    return kpis;
}

}  // namespace tets
