// Regenerates the bundled data/ fixtures. The committed CSVs are exactly the
// output of this tool with its default seeds; rerun after changing the
// generators and commit the result.

#include <filesystem>
#include <iostream>
#include <string>

#include "tets/csv.hpp"
#include "tets/simulation.hpp"

namespace {

constexpr std::uint64_t kTrendSeasonalSeed = 424242;
constexpr std::uint64_t kM5LikeSeed = 2;
constexpr int kM5LikeDays = 365;

tets::SeriesFile to_file(const std::vector<double>& values,
                         const std::vector<double>& bound, bool has_bound) {
    tets::SeriesFile file;
    file.has_bound = has_bound;
    file.values = values;
    file.bound = bound;
    for (std::size_t i = 0; i < values.size(); ++i) {
        file.timestamps.push_back(std::to_string(i + 1));
    }
    return file;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string out_dir = argc > 1 ? argv[1] : "data";
    std::filesystem::create_directories(out_dir);

    const tets::TrendSeasonalFixture ts = tets::make_trend_seasonal_fixture(kTrendSeasonalSeed);
    // The stored values are the observed (clipped) ones in the censored
    // window; the holdout stays uncensored so evaluations target true demand.
    std::vector<double> observed(ts.values.size());
    for (std::size_t t = 0; t < ts.values.size(); ++t) {
        observed[t] = std::min(ts.values[t], ts.bound[t]);
    }
    tets::write_series_csv(out_dir + "/trend_seasonal.csv",
                           to_file(observed, ts.bound, true));

    const std::vector<double> demand = tets::make_m5_like_demand(kM5LikeSeed, kM5LikeDays);
    tets::write_series_csv(
        out_dir + "/m5_like_daily.csv",
        to_file(demand, std::vector<double>(demand.size(),
                                            std::numeric_limits<double>::infinity()),
                false));

    std::cout << "wrote " << out_dir << "/trend_seasonal.csv and " << out_dir
              << "/m5_like_daily.csv\n";
    return 0;
}
