#pragma once

#include <cstdint>
#include <vector>

#include "fxlv/market_data.hpp"

namespace fxlv {

// Synthetic market history: a GBM spot path dressed with stationary flat-smile
// quotes (rr = fly = 0) and constant zero curves on every day. Dates are
// consecutive calendar days, so hedging a 1-week option steps daily. Intended
// for backtest validation where the true dynamics are known.
struct SyntheticConfig {
    double spot = 1.0;
    double atm_vol = 0.10;       // quoted flat vol, all tenors
    double realized_vol = 0.10;  // vol driving the spot path
    double dom_rate = 0.0;
    double for_rate = 0.0;
    double drift = 0.0;  // spot drift mu; rd - rf keeps hedging unbiased
    int days = 60;
    std::uint64_t seed = 12345;
    std::string start_date = "2020-01-06";
    std::vector<double> tenors = standard_tenors();

    static std::vector<double> standard_tenors();
};

std::vector<MarketSnapshot> make_history(const SyntheticConfig& cfg);

}  // namespace fxlv
