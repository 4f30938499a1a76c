#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fxlv/hedging.hpp"
#include "fxlv/market_data.hpp"
#include "fxlv/parallel.hpp"

namespace fxlv {

enum class Scheme { bs, lv_tc, lv_sticky };
const char* scheme_name(Scheme s);
Scheme scheme_from_string(const std::string& s);
SmileLabel label_from_string(const std::string& s);

struct BacktestConfig {
    double tenor_years = 0.0;
    SmileLabel label = SmileLabel::atm;
    OptionSide side = OptionSide::call;
    Scheme scheme = Scheme::bs;
    double gamma = 7.0;
    int grid_m = 400;
    double bump = 0.001;  // relative spot bump for the sticky-delta scheme
    Exec exec = Exec::serial;
};

// Day-0 premium plus one delta per rebalance day (the expiry day carries no
// delta), for a single start date.
struct SchemeDeltas {
    double strike = 0.0;
    double premium = 0.0;
    std::vector<double> deltas;
};

// Day-i deltas per scheme, hedging the label's strike solved on day 0:
//
// bs: Garman-Kohlhagen delta with period-average rates and ATM vol over the
// remaining maturity, all re-read from day i's quotes.
//
// lv_tc: day i uses the slope of the spline through day-(i-1)'s backward
// solve, evaluated at day i's spot; day (i-1)'s solve prices the remaining
// maturity on day (i-1)'s calibrated surface, mesh centered at day-(i-1)'s
// spot. The day-0 solve also provides the premium.
//
// lv_sticky: day i differentiates across two re-solves of day (i-1)'s market
// with the market spot bumped by dS = bump * S_{i-1}: quotes held, calibration
// strikes re-solved, surfaces and meshes rebuilt. The central difference
// moves the evaluation point with the bump,
//   delta_i = (V+(S_i + dS) - V-(S_i - dS)) / (2 dS),
// so on a flat smile (bump leaves the surface unchanged) it collapses to the
// ordinary slope. The premium comes from the unbumped day-0 solve.
//
// n_steps is the trading-day count N between write and expiry; deltas come out
// sized N. Mesh breaches surface as NumericalError.
SchemeDeltas bs_backtest_deltas(const std::vector<MarketSnapshot>& days, std::size_t start,
                                std::size_t n_steps, const BacktestConfig& cfg);
SchemeDeltas lv_tc_deltas(const std::vector<MarketSnapshot>& days, std::size_t start,
                          std::size_t n_steps, const BacktestConfig& cfg);
SchemeDeltas lv_sticky_deltas(const std::vector<MarketSnapshot>& days, std::size_t start,
                              std::size_t n_steps, const BacktestConfig& cfg);

struct StartResult {
    std::string start_date;
    double strike = 0.0;
    double premium = 0.0;
    HedgeLedger ledger;
};

struct FailedStart {
    std::string start_date;
    std::string reason;
};

struct BacktestResult {
    std::vector<StartResult> results;   // start-date order
    std::vector<FailedStart> failures;  // skipped starts with reasons
    ErrorStats summary;                 // over the successful hedging errors
};

// The option written on day s expires round(T * 365.2425) calendar days
// later; the hedge runs over the N snapshots up to and including the last one
// at or before expiry, with dt = T / N. Returns the index of that final
// snapshot, or start itself if no later snapshot qualifies.
std::size_t expiry_index(const std::vector<MarketSnapshot>& days, std::size_t start,
                         double tenor_years);

// Rolls the start date over every admissible day: one whose expiry the
// history reaches, so the payoff date is covered. Numerical failures (mesh
// breaches, degenerate data) are recorded and skipped; the summary covers the
// completed starts. Start dates are independent, so the parallel path
// distributes them and stores into per-start slots.
BacktestResult run_backtest(const std::vector<MarketSnapshot>& days, const BacktestConfig& cfg);

}  // namespace fxlv
