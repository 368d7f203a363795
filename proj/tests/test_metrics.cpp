#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "tets/metrics.hpp"

using namespace tets;

TEST_SUITE("metrics") {

TEST_CASE("rmse") {
    CHECK(rmse({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}) == 0.0);
    CHECK(rmse({4.0}, {1.0}) == 3.0);
    // sqrt((1 + 9) / 2)
    CHECK(std::abs(rmse({2.0, 0.0}, {1.0, 3.0}) - std::sqrt(5.0)) < 1e-15);
    CHECK_THROWS_AS(rmse({}, {}), std::invalid_argument);
    CHECK_THROWS_AS(rmse({1.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("mean error is signed forecast minus actual") {
    CHECK(me({5.0, 5.0}, {4.0, 4.0}) == 1.0);   // over-forecast -> positive
    CHECK(me({3.0, 5.0}, {4.0, 4.0}) == 0.0);
    CHECK(me({2.0}, {4.0}) == -2.0);            // under-forecast -> negative
    CHECK_THROWS_AS(me({}, {}), std::invalid_argument);
}

TEST_CASE("inventory kpis") {
    // demand 10, 20, 30 against availability 15, 20, 25:
    // lost = 0 + 0 + 5, excess = 5 + 0 + 0, served periods = 2/3.
    const InventoryKpis k = inventory_kpis({10.0, 20.0, 30.0}, {15.0, 20.0, 25.0});
    CHECK(k.lost_sales == 5.0);
    CHECK(k.excess_stock == 5.0);
    CHECK(std::abs(k.achieved_csl - 2.0 / 3.0) < 1e-15);

    const InventoryKpis all = inventory_kpis({1.0, 2.0}, {5.0, 5.0});
    CHECK(all.lost_sales == 0.0);
    CHECK(all.achieved_csl == 1.0);
    CHECK(all.excess_stock == 7.0);

    CHECK_THROWS_AS(inventory_kpis({1.0}, {}), std::invalid_argument);
}

TEST_CASE("eval report defaults") {
    const EvalReport r;
    CHECK_FALSE(r.sd_bias.has_value());
    CHECK(r.n == 0);
}

}  // TEST_SUITE
