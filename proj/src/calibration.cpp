#include "fxlv/calibration.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

#include "fxlv/black_scholes.hpp"
#include "fxlv/cn_solver.hpp"
#include "fxlv/mesh.hpp"

namespace fxlv {

CalibrationReport calibrate_check(const MarketSnapshot& snap, const CalibrationConfig& cfg) {
    const ImpliedSurface surf(snap);
    const std::size_t n_tenors = snap.quotes.size();
    std::vector<std::array<CalibrationRow, 5>> slots(n_tenors);

    parallel_for(cfg.exec, static_cast<std::ptrdiff_t>(n_tenors), [&](std::ptrdiff_t ti) {
        const TenorQuote& q = snap.quotes[static_cast<std::size_t>(ti)];
        const double T = q.tenor_years;
        auto& rows = slots[static_cast<std::size_t>(ti)];
        for (int l = 0; l < 5; ++l) {
            rows[l].tenor = T;
            rows[l].label = static_cast<SmileLabel>(l);
        }
        try {
            const auto pts = smile_points(snap, q);
            const double rd = snap.dom_curve().average(T);
            const double rf = snap.for_curve().average(T);
            for (int l = 0; l < 5; ++l) {
                rows[l].strike = pts[l].strike;
                rows[l].market_vol = pts[l].vol;
            }
            const Mesh mesh =
                build_mesh(snap.spot, T, surf.mean_atm_vol(), cfg.gamma, cfg.grid_m);
            const LocalVolGrid grid = build_localvol_grid(surf, mesh, cfg.dupire, Exec::serial);
            for (int l = 0; l < 5; ++l) {
                try {
                    const CNSolution sol =
                        cn_solve(mesh, PayoffSpec{OptionSide::call, rows[l].strike}, grid,
                                 surf.dom_curve(), surf.for_curve());
                    rows[l].model_vol =
                        bs::implied_vol(sol.price(snap.spot), snap.spot, rows[l].strike, T, rd, rf);
                    rows[l].abs_error = std::fabs(rows[l].model_vol - rows[l].market_vol);
                    rows[l].flagged = rows[l].abs_error > cfg.flag_threshold;
                } catch (const std::exception& e) {
                    rows[l].failed = true;
                    rows[l].reason = e.what();
                }
            }
        } catch (const std::exception& e) {
            for (auto& r : rows) {
                r.failed = true;
                r.reason = e.what();
            }
        }
    });

    CalibrationReport out;
    out.date = snap.date;
    out.rows.reserve(n_tenors * 5);
    double sum = 0.0;
    std::size_t ok = 0;
    for (auto& rows : slots)
        for (auto& r : rows) {
            if (r.failed) {
                ++out.failed_count;
            } else {
                sum += r.abs_error;
                out.max_abs_error = std::max(out.max_abs_error, r.abs_error);
                ++ok;
            }
            out.rows.push_back(std::move(r));
        }
    out.mean_abs_error = ok != 0 ? sum / static_cast<double>(ok) : 0.0;
    return out;
}

std::vector<CellAverage> cell_averages(const std::vector<CalibrationReport>& reports) {
    std::map<std::pair<double, int>, CellAverage> cells;
    for (const CalibrationReport& rep : reports)
        for (const CalibrationRow& r : rep.rows) {
            CellAverage& c = cells[{r.tenor, static_cast<int>(r.label)}];
            c.tenor = r.tenor;
            c.label = r.label;
            if (r.failed) {
                ++c.failed;
            } else {
                c.mean_abs_error += r.abs_error;  // sum for now, divided below
                c.max_abs_error = std::max(c.max_abs_error, r.abs_error);
                ++c.count;
            }
        }
    std::vector<CellAverage> out;
    out.reserve(cells.size());
    for (auto& [key, c] : cells) {
        if (c.count != 0) c.mean_abs_error /= static_cast<double>(c.count);
        out.push_back(c);
    }
    return out;
}

}  // namespace fxlv
