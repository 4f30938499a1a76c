#pragma once

#include <cstdint>
#include <vector>

#include "fxlv/black_scholes.hpp"
#include "fxlv/implied_surface.hpp"
#include "fxlv/market_data.hpp"
#include "fxlv/parallel.hpp"

namespace fxlv {

// Realized inputs of one hedge: N+1 spots and the per-step accrual rates
// quoted on each rebalance day (dom_rates[i] accrues cash from day i to i+1).
struct HedgePath {
    std::vector<double> spots;      // size N+1
    std::vector<double> dom_rates;  // size N
    std::vector<double> for_rates;  // size N
    double dt = 0.0;                // step in years
};

// Cash account of a short option hedged with deltas[0..N-1]:
//   P_0 = premium - delta_0 S_0
//   P_i = e^{r dt} P_{i-1} + (e^{q dt} - 1) delta_{i-1} S_{i-1}
//         + (delta_{i-1} - delta_i) S_i                        (1 <= i < N)
//   P_N = e^{r dt} P_{N-1} + (e^{q dt} - 1) delta_{N-1} S_{N-1}
//         + delta_{N-1} S_N
// error = P_N - payoff(S_N). Signed deltas make the same recursion cover puts.
struct HedgeLedger {
    double premium = 0.0;
    std::vector<double> deltas;
    std::vector<double> cash;  // P_0..P_N
    double payoff = 0.0;
    double error = 0.0;
};

HedgeLedger hedge_path(const HedgePath& path, double premium, const std::vector<double>& deltas,
                       double strike, OptionSide side);

// Log-Euler path S_{n+1} = S_n exp((mu - sigma^2/2) dt + sigma sqrt(dt) Z_n)
// on the uniform grid t_n = n * maturity / steps; sigma is constant, read off
// the instantaneous term structure at t_n, or looked up on the local-vol grid
// at (S_n, t_n). Returns steps+1 spots. Fixed seed gives a reproducible path.
std::vector<double> simulate_gbm(double s0, double mu, double vol, double maturity, int steps,
                                 std::uint64_t seed);
std::vector<double> simulate_gbm(double s0, double mu, const VolTermStructure& vols,
                                 double maturity, int steps, std::uint64_t seed);
std::vector<double> simulate_lv(double s0, double mu, const LocalVolGrid& grid, double maturity,
                                int steps, std::uint64_t seed);

// Stable per-path seed derivation so parallel ensembles are schedule
// independent (splitmix64 of base + index).
std::uint64_t path_seed(std::uint64_t base, std::uint64_t index);

// Monte Carlo hedging experiment: short one vanilla, rebalance `rebalances`
// times over the option's life, measure terminal P&L across paths.
struct SimHedgeConfig {
    enum class Scheme { bs, lv_tc };

    Scheme scheme = Scheme::bs;
    double spot = 1.0;
    double strike = 1.0;
    double vol = 0.2;
    double rd = 0.0;
    double rf = 0.0;
    double maturity = 1.0;
    OptionSide side = OptionSide::call;
    int rebalances = 250;
    int paths = 1000;
    std::uint64_t seed = 0;
    double gamma = 7.0;  // mesh width for the lv_tc scheme
    int grid_m = 400;
};

struct SimHedgeResult {
    std::vector<double> errors;  // one per completed path, path order
    double mean = 0.0;
    double stddev = 0.0;
    std::size_t failures = 0;  // paths that left the mesh
};

// bs: closed-form deltas and premium at the configured flat vol.
// lv_tc: one backward solve on a flat local-vol grid; deltas read from the
// value-function slices nearest each rebalance date. Paths for lv_tc are drawn
// through the grid lookup so a flat grid reproduces the bs paths seed for
// seed. Parallel execution partitions paths; per-path seeding keeps results
// identical to the serial reference.
SimHedgeResult simulate_hedge(const SimHedgeConfig& cfg, Exec exec = Exec::serial);

// Sample mean and (n-1)-normalized standard deviation; std is 0 for n < 2.
struct ErrorStats {
    double mean = 0.0;
    double stddev = 0.0;
};
ErrorStats error_stats(const std::vector<double>& xs);

}  // namespace fxlv
