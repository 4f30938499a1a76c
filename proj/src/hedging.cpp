#include "fxlv/hedging.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "fxlv/cn_solver.hpp"
#include "fxlv/errors.hpp"
#include "fxlv/mesh.hpp"

namespace fxlv {

HedgeLedger hedge_path(const HedgePath& path, double premium, const std::vector<double>& deltas,
                       double strike, OptionSide side) {
    const std::size_t n = deltas.size();
    if (n == 0) throw DomainError("hedge_path: need at least one delta");
    if (path.spots.size() != n + 1)
        throw DomainError("hedge_path: spots must number deltas + 1");
    if (path.dom_rates.size() != n || path.for_rates.size() != n)
        throw DomainError("hedge_path: rate count must match delta count");
    if (!(path.dt > 0.0)) throw DomainError("hedge_path: dt must be positive");
    if (!(strike > 0.0)) throw DomainError("hedge_path: strike must be positive");

    HedgeLedger ledger;
    ledger.premium = premium;
    ledger.deltas = deltas;
    ledger.cash.resize(n + 1);
    ledger.cash[0] = premium - deltas[0] * path.spots[0];
    for (std::size_t i = 1; i <= n; ++i) {
        const double grow = std::exp(path.dom_rates[i - 1] * path.dt);
        const double carry =
            (std::exp(path.for_rates[i - 1] * path.dt) - 1.0) * deltas[i - 1] * path.spots[i - 1];
        const double rebalance =
            i < n ? (deltas[i - 1] - deltas[i]) * path.spots[i] : deltas[n - 1] * path.spots[n];
        ledger.cash[i] = grow * ledger.cash[i - 1] + carry + rebalance;
    }
    const double st = path.spots[n];
    ledger.payoff = side == OptionSide::call ? std::max(st - strike, 0.0)
                                             : std::max(strike - st, 0.0);
    ledger.error = ledger.cash[n] - ledger.payoff;
    return ledger;
}

namespace {

template <class VolAt>
std::vector<double> simulate_impl(double s0, double mu, double maturity, int steps,
                                  std::uint64_t seed, const VolAt& vol_at) {
    if (!(s0 > 0.0)) throw DomainError("simulate: spot must be positive");
    if (!(maturity > 0.0)) throw DomainError("simulate: maturity must be positive");
    if (steps < 1) throw DomainError("simulate: need at least one step");
    const double dt = maturity / steps;
    const double sqdt = std::sqrt(dt);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::vector<double> s(steps + 1);
    s[0] = s0;
    for (int i = 0; i < steps; ++i) {
        const double t = maturity * i / steps;
        const double sig = vol_at(s[i], t);
        s[i + 1] = s[i] * std::exp((mu - 0.5 * sig * sig) * dt + sig * sqdt * normal(rng));
    }
    return s;
}

}  // namespace

std::vector<double> simulate_gbm(double s0, double mu, double vol, double maturity, int steps,
                                 std::uint64_t seed) {
    if (!(vol >= 0.0)) throw DomainError("simulate_gbm: vol must be nonnegative");
    return simulate_impl(s0, mu, maturity, steps, seed, [=](double, double) { return vol; });
}

std::vector<double> simulate_gbm(double s0, double mu, const VolTermStructure& vols,
                                 double maturity, int steps, std::uint64_t seed) {
    return simulate_impl(s0, mu, maturity, steps, seed,
                         [&](double, double t) { return vols.instantaneous(t); });
}

std::vector<double> simulate_lv(double s0, double mu, const LocalVolGrid& grid, double maturity,
                                int steps, std::uint64_t seed) {
    return simulate_impl(s0, mu, maturity, steps, seed,
                         [&](double s, double t) { return grid.lookup(s, t); });
}

std::uint64_t path_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

ErrorStats error_stats(const std::vector<double>& xs) {
    ErrorStats st;
    if (xs.empty()) return st;
    double sum = 0.0;
    for (double x : xs) sum += x;
    st.mean = sum / static_cast<double>(xs.size());
    if (xs.size() < 2) return st;
    double ss = 0.0;
    for (double x : xs) ss += (x - st.mean) * (x - st.mean);
    st.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    return st;
}

SimHedgeResult simulate_hedge(const SimHedgeConfig& cfg, Exec exec) {
    if (cfg.paths < 1) throw ConfigError("simulate_hedge: need at least one path");
    if (cfg.rebalances < 1) throw ConfigError("simulate_hedge: need at least one rebalance");
    if (!(cfg.vol > 0.0)) throw ConfigError("simulate_hedge: vol must be positive");

    const int nreb = cfg.rebalances;
    const double dt = cfg.maturity / nreb;
    const double mu = cfg.rd - cfg.rf;

    // Scheme setup. For lv_tc one backward solve provides the value function
    // at every rebalance date; slice k is the mesh row nearest t_k.
    double premium = 0.0;
    Mesh mesh;
    LocalVolGrid grid;
    CNSlices slices;
    std::vector<std::size_t> slice_of_step(nreb);
    if (cfg.scheme == SimHedgeConfig::Scheme::lv_tc) {
        mesh = build_mesh(cfg.spot, cfg.maturity, cfg.vol, cfg.gamma, cfg.grid_m);
        grid = LocalVolGrid::constant(mesh, cfg.vol);
        std::vector<int> rows(nreb);
        for (int k = 0; k < nreb; ++k)
            rows[k] = static_cast<int>(std::lround(static_cast<double>(k) * mesh.n / nreb));
        CNSlices sl = cn_solve_slices(mesh, PayoffSpec{cfg.side, cfg.strike}, cfg.vol, cfg.rd,
                                      cfg.rf, rows);
        // Map each rebalance step to its slice position (rows deduplicate).
        for (int k = 0; k < nreb; ++k) {
            const int want = static_cast<int>(std::lround(static_cast<double>(k) * mesh.n / nreb));
            const auto it = std::lower_bound(sl.indices.begin(), sl.indices.end(), want);
            slice_of_step[k] = static_cast<std::size_t>(it - sl.indices.begin());
        }
        slices = std::move(sl);
        premium = slices.value(slice_of_step[0], cfg.spot);
    } else {
        premium = bs::price(cfg.side, cfg.spot, cfg.strike, cfg.maturity, cfg.rd, cfg.rf,
                            cfg.vol);
    }

    SimHedgeResult result;
    std::vector<double> errors(cfg.paths, 0.0);
    std::vector<char> failed(cfg.paths, 0);

    parallel_for(exec, cfg.paths, [&](std::ptrdiff_t p) {
        const std::uint64_t seed = path_seed(cfg.seed, static_cast<std::uint64_t>(p));
        try {
            std::vector<double> spots =
                cfg.scheme == SimHedgeConfig::Scheme::lv_tc
                    ? simulate_lv(cfg.spot, mu, grid, cfg.maturity, nreb, seed)
                    : simulate_gbm(cfg.spot, mu, cfg.vol, cfg.maturity, nreb, seed);
            std::vector<double> deltas(nreb);
            for (int k = 0; k < nreb; ++k) {
                if (cfg.scheme == SimHedgeConfig::Scheme::lv_tc) {
                    if (!mesh.contains(spots[k]))
                        throw NumericalError("path left the mesh at step " + std::to_string(k));
                    deltas[k] = slices.delta(slice_of_step[k], spots[k]);
                } else {
                    const double t_rem = cfg.maturity - dt * k;
                    deltas[k] = bs::delta(cfg.side, spots[k], cfg.strike, t_rem, cfg.rd, cfg.rf,
                                          cfg.vol);
                }
            }
            HedgePath path{std::move(spots), std::vector<double>(nreb, cfg.rd),
                           std::vector<double>(nreb, cfg.rf), dt};
            errors[p] = hedge_path(path, premium, deltas, cfg.strike, cfg.side).error;
        } catch (const std::exception&) {
            failed[p] = 1;
        }
    });

    for (int p = 0; p < cfg.paths; ++p) {
        if (failed[p])
            ++result.failures;
        else
            result.errors.push_back(errors[p]);
    }
    const ErrorStats st = error_stats(result.errors);
    result.mean = st.mean;
    result.stddev = st.stddev;
    return result;
}

}  // namespace fxlv
