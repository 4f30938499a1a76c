#include "fxlv/backtest.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "fxlv/cn_solver.hpp"
#include "fxlv/errors.hpp"
#include "fxlv/implied_surface.hpp"
#include "fxlv/mesh.hpp"

namespace fxlv {

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::bs: return "bs";
        case Scheme::lv_tc: return "lv_tc";
        case Scheme::lv_sticky: return "lv_sticky";
    }
    return "?";
}

Scheme scheme_from_string(const std::string& s) {
    if (s == "bs") return Scheme::bs;
    if (s == "lv_tc") return Scheme::lv_tc;
    if (s == "lv_sticky") return Scheme::lv_sticky;
    throw ConfigError("unknown scheme '" + s + "' (want bs, lv_tc or lv_sticky)");
}

SmileLabel label_from_string(const std::string& s) {
    for (SmileLabel l : {SmileLabel::p10, SmileLabel::p25, SmileLabel::atm, SmileLabel::c25,
                         SmileLabel::c10})
        if (s == label_name(l)) return l;
    throw ConfigError("unknown label '" + s + "' (want p10, p25, atm, c25 or c10)");
}

namespace {

// Strike of the hedged option: the label's calibration strike on day `start`.
double label_strike(const MarketSnapshot& snap, double tenor, SmileLabel label) {
    const auto pts = smile_points(snap, snap.quote_at(tenor));
    return pts[static_cast<int>(label)].strike;
}

// One backward solve of day `day`'s market for remaining maturity t_rem,
// centered at the day's (possibly bumped) spot.
CNSolution day_solve(const MarketSnapshot& snap, double t_rem, double strike,
                     const BacktestConfig& cfg) {
    const ImpliedSurface surf(snap);
    const Mesh mesh = build_mesh(snap.spot, t_rem, surf.mean_atm_vol(), cfg.gamma, cfg.grid_m);
    const LocalVolGrid grid = build_localvol_grid(surf, mesh);
    return cn_solve(mesh, PayoffSpec{cfg.side, strike}, grid, surf.dom_curve(),
                    surf.for_curve());
}

double eval_delta_checked(const CNSolution& sol, double s, std::size_t day) {
    if (!sol.mesh().contains(s))
        throw NumericalError("mesh width breach at day " + std::to_string(day));
    return sol.delta(s);
}

double eval_price_checked(const CNSolution& sol, double s, std::size_t day) {
    if (!sol.mesh().contains(s))
        throw NumericalError("mesh width breach at day " + std::to_string(day));
    return sol.price(s);
}

}  // namespace

SchemeDeltas bs_backtest_deltas(const std::vector<MarketSnapshot>& days, std::size_t start,
                                std::size_t n_steps, const BacktestConfig& cfg) {
    const double T = cfg.tenor_years;
    const double dt = T / static_cast<double>(n_steps);
    SchemeDeltas out;
    out.strike = label_strike(days[start], T, cfg.label);
    out.deltas.resize(n_steps);
    for (std::size_t i = 0; i < n_steps; ++i) {
        const MarketSnapshot& snap = days[start + i];
        const double t_rem = T - dt * static_cast<double>(i);
        const double rd = snap.dom_curve().average(t_rem);
        const double rf = snap.for_curve().average(t_rem);
        const double vol = snap.atm_structure().average(t_rem);
        out.deltas[i] = bs::delta(cfg.side, snap.spot, out.strike, t_rem, rd, rf, vol);
        if (i == 0)
            out.premium = bs::price(cfg.side, snap.spot, out.strike, t_rem, rd, rf, vol);
    }
    return out;
}

SchemeDeltas lv_tc_deltas(const std::vector<MarketSnapshot>& days, std::size_t start,
                          std::size_t n_steps, const BacktestConfig& cfg) {
    const double T = cfg.tenor_years;
    const double dt = T / static_cast<double>(n_steps);
    SchemeDeltas out;
    out.strike = label_strike(days[start], T, cfg.label);
    out.deltas.resize(n_steps);

    // prev holds day (i-1)'s solve when computing delta_i; the day-0 solve
    // also supplies the premium.
    CNSolution prev = day_solve(days[start], T, out.strike, cfg);
    out.premium = prev.price(days[start].spot);
    out.deltas[0] = prev.delta(days[start].spot);
    for (std::size_t i = 1; i < n_steps; ++i) {
        out.deltas[i] = eval_delta_checked(prev, days[start + i].spot, i);
        if (i + 1 < n_steps) {
            const double t_rem = T - dt * static_cast<double>(i);
            prev = day_solve(days[start + i], t_rem, out.strike, cfg);
        }
    }
    return out;
}

namespace {

struct BumpedPair {
    CNSolution up;
    CNSolution down;
    double ds;  // bump * unbumped spot
};

BumpedPair bumped_solves(const MarketSnapshot& snap, double t_rem, double strike,
                         const BacktestConfig& cfg) {
    MarketSnapshot up = snap, down = snap;
    up.spot = snap.spot * (1.0 + cfg.bump);
    down.spot = snap.spot * (1.0 - cfg.bump);
    return BumpedPair{day_solve(up, t_rem, strike, cfg), day_solve(down, t_rem, strike, cfg),
                      cfg.bump * snap.spot};
}

}  // namespace

SchemeDeltas lv_sticky_deltas(const std::vector<MarketSnapshot>& days, std::size_t start,
                              std::size_t n_steps, const BacktestConfig& cfg) {
    if (!(cfg.bump > 0.0)) throw ConfigError("sticky scheme: bump must be positive");
    const double T = cfg.tenor_years;
    const double dt = T / static_cast<double>(n_steps);
    SchemeDeltas out;
    out.strike = label_strike(days[start], T, cfg.label);
    out.deltas.resize(n_steps);

    out.premium = day_solve(days[start], T, out.strike, cfg).price(days[start].spot);

    // pair holds day (i-1)'s bumped solves when computing delta_i. The spot
    // and the surface move together: the up solve is evaluated dS above the
    // query spot, the down solve dS below.
    BumpedPair pair = bumped_solves(days[start], T, out.strike, cfg);
    auto central = [](const BumpedPair& p, double s, std::size_t day) {
        return (eval_price_checked(p.up, s + p.ds, day) -
                eval_price_checked(p.down, s - p.ds, day)) /
               (2.0 * p.ds);
    };
    out.deltas[0] = central(pair, days[start].spot, 0);
    for (std::size_t i = 1; i < n_steps; ++i) {
        out.deltas[i] = central(pair, days[start + i].spot, i);
        if (i + 1 < n_steps) {
            const double t_rem = T - dt * static_cast<double>(i);
            pair = bumped_solves(days[start + i], t_rem, out.strike, cfg);
        }
    }
    return out;
}

std::size_t expiry_index(const std::vector<MarketSnapshot>& days, std::size_t start,
                         double tenor_years) {
    const int expiry_day =
        date_to_days(days[start].date) + static_cast<int>(std::lround(tenor_years * 365.2425));
    std::size_t end = start;
    for (std::size_t i = start + 1; i < days.size(); ++i) {
        if (date_to_days(days[i].date) > expiry_day) break;
        end = i;
    }
    return end;
}

BacktestResult run_backtest(const std::vector<MarketSnapshot>& days, const BacktestConfig& cfg) {
    if (!(cfg.tenor_years > 0.0)) throw ConfigError("backtest: tenor must be positive");
    if (days.size() < 2) throw DataError("backtest: need at least two snapshots");

    // Admissible starts: the history reaches the option's expiry (otherwise the
    // payoff date is missing) and at least one snapshot lies inside the window.
    const int horizon = static_cast<int>(std::lround(cfg.tenor_years * 365.2425));
    const int last_day = date_to_days(days.back().date);
    std::vector<std::pair<std::size_t, std::size_t>> windows;  // (start, n_steps)
    for (std::size_t s = 0; s + 1 < days.size(); ++s) {
        if (date_to_days(days[s].date) + horizon > last_day) break;
        const std::size_t e = expiry_index(days, s, cfg.tenor_years);
        if (e > s) windows.emplace_back(s, e - s);
    }
    if (windows.empty()) throw DataError("backtest: no admissible start dates for this tenor");

    struct Slot {
        StartResult result;
        std::string failure;
        bool failed = false;
    };
    std::vector<Slot> slots(windows.size());

    parallel_for(cfg.exec, static_cast<std::ptrdiff_t>(windows.size()), [&](std::ptrdiff_t w) {
        const auto [s, n] = windows[static_cast<std::size_t>(w)];
        Slot& slot = slots[static_cast<std::size_t>(w)];
        slot.result.start_date = days[s].date;
        try {
            SchemeDeltas sd;
            switch (cfg.scheme) {
                case Scheme::bs: sd = bs_backtest_deltas(days, s, n, cfg); break;
                case Scheme::lv_tc: sd = lv_tc_deltas(days, s, n, cfg); break;
                case Scheme::lv_sticky: sd = lv_sticky_deltas(days, s, n, cfg); break;
            }
            HedgePath path;
            path.dt = cfg.tenor_years / static_cast<double>(n);
            path.spots.resize(n + 1);
            path.dom_rates.resize(n);
            path.for_rates.resize(n);
            for (std::size_t i = 0; i <= n; ++i) path.spots[i] = days[s + i].spot;
            for (std::size_t i = 0; i < n; ++i) {
                // Overnight accrual at the first-pillar rate of the day.
                path.dom_rates[i] = days[s + i].quotes.front().dom_zero;
                path.for_rates[i] = days[s + i].quotes.front().for_zero;
            }
            slot.result.strike = sd.strike;
            slot.result.premium = sd.premium;
            slot.result.ledger = hedge_path(path, sd.premium, sd.deltas, sd.strike, cfg.side);
        } catch (const std::exception& e) {
            slot.failed = true;
            slot.failure = e.what();
        }
    });

    BacktestResult out;
    std::vector<double> errors;
    for (Slot& slot : slots) {
        if (slot.failed)
            out.failures.push_back({std::move(slot.result.start_date), std::move(slot.failure)});
        else {
            errors.push_back(slot.result.ledger.error);
            out.results.push_back(std::move(slot.result));
        }
    }
    out.summary = error_stats(errors);
    return out;
}

}  // namespace fxlv
