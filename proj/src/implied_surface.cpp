#include "fxlv/implied_surface.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fxlv/errors.hpp"
#include "fxlv/warnings.hpp"

namespace fxlv {

ImpliedSurface::ImpliedSurface(const MarketSnapshot& snap)
    : spot_(snap.spot),
      mean_atm_(snap.mean_atm_vol()),
      dom_(snap.dom_curve()),
      for_(snap.for_curve()) {
    if (snap.quotes.size() < 2)
        throw DataError("implied surface: need at least 2 tenors, got " +
                        std::to_string(snap.quotes.size()));
    min_strike_ = 1e300;
    max_strike_ = 0.0;
    tenors_.reserve(snap.quotes.size());
    smiles_.reserve(snap.quotes.size());
    for (const TenorQuote& q : snap.quotes) {
        const auto pts = smile_points(snap, q);
        std::vector<double> ks(5), vs(5);
        for (int i = 0; i < 5; ++i) ks[i] = pts[i].strike, vs[i] = pts[i].vol;
        min_strike_ = std::min(min_strike_, ks.front());
        max_strike_ = std::max(max_strike_, ks.back());
        tenors_.push_back(q.tenor_years);
        smiles_.emplace_back(std::move(ks), std::move(vs));
    }
}

ImpliedSurface::StrikeSection ImpliedSurface::section(double strike) const {
    if (!(strike > 0.0)) throw DomainError("implied surface: strike must be positive");
    const std::size_t n = tenors_.size();
    std::vector<double> val(n), slope(n), curv(n);
    for (std::size_t i = 0; i < n; ++i) {
        val[i] = smiles_[i].value(strike);
        slope[i] = smiles_[i].deriv(strike);
        curv[i] = smiles_[i].second_deriv(strike);
    }
    StrikeSection s;
    s.value_ = CubicSpline(tenors_, std::move(val));
    s.slope_ = CubicSpline(tenors_, std::move(slope));
    s.curvature_ = CubicSpline(tenors_, std::move(curv));
    return s;
}

ImpliedSurface::Derivs ImpliedSurface::StrikeSection::at(double maturity) const {
    return {value_.value(maturity), value_.deriv(maturity), slope_.value(maturity),
            curvature_.value(maturity)};
}

ImpliedSurface::Derivs ImpliedSurface::theta_and_derivs(double strike, double maturity) const {
    if (!(maturity >= 0.0)) throw DomainError("implied surface: maturity must be nonnegative");
    return section(strike).at(maturity);
}

double dupire_local_vol(const ImpliedSurface::Derivs& d, double spot, double strike,
                        double maturity, double r, double q, double int_rq,
                        const DupireParams& params) {
    const double th = d.theta;
    if (!(th > 0.0)) {
        // Extrapolated surface left the positive domain; treat like negative
        // local variance.
        warnings::bump(warnings::Kind::negative_local_variance);
        return 0.0;
    }
    const double T = maturity;
    const double d1rt = (std::log(spot / strike) + int_rq + 0.5 * th * th * T) / th;
    const double a = 1.0 + strike * d.d_k * d1rt;
    const double denom =
        a * a + strike * strike * th * T * (d.d_kk - d1rt * d.d_k * d.d_k);
    if (denom < params.denom_floor) {
        warnings::bump(warnings::Kind::capped_local_vol);
        return params.sigma_cap;
    }
    const double numer = th * th + 2.0 * th * T * d.d_t + 2.0 * (r - q) * strike * th * T * d.d_k;
    const double var = numer / denom;
    if (var < 0.0) {
        warnings::bump(warnings::Kind::negative_local_variance);
        return 0.0;
    }
    const double sig = std::sqrt(var);
    if (sig > params.sigma_cap) {
        warnings::bump(warnings::Kind::capped_local_vol);
        return params.sigma_cap;
    }
    return sig;
}

double dupire_local_vol(const ImpliedSurface& surf, double strike, double maturity,
                        const DupireParams& params) {
    const double r = surf.dom_curve().instantaneous(maturity);
    const double q = surf.for_curve().instantaneous(maturity);
    const double irq = surf.dom_curve().integral(maturity) - surf.for_curve().integral(maturity);
    return dupire_local_vol(surf.theta_and_derivs(strike, maturity), surf.spot(), strike,
                            maturity, r, q, irq, params);
}

double LocalVolGrid::lookup(double s, double t) const {
    const std::size_t ns = prices.size();
    double x = std::log(s);
    bool clamped = false;
    if (x < log_prices.front()) x = log_prices.front(), clamped = true;
    if (x > log_prices.back()) x = log_prices.back(), clamped = true;
    if (t < times.front()) t = times.front(), clamped = true;
    if (t > times.back()) t = times.back(), clamped = true;
    if (clamped) warnings::bump(warnings::Kind::sim_edge_clamp);

    auto cell = [](const std::vector<double>& axis, double v) {
        const auto it = std::upper_bound(axis.begin(), axis.end(), v);
        std::size_t i = static_cast<std::size_t>(it - axis.begin());
        if (i == 0) return std::size_t{0};
        if (i >= axis.size()) return axis.size() - 2;
        return i - 1;
    };
    const std::size_t i = cell(times, t);
    const std::size_t j = cell(log_prices, x);
    const double ty = (t - times[i]) / (times[i + 1] - times[i]);
    const double tx = (x - log_prices[j]) / (log_prices[j + 1] - log_prices[j]);
    // Difference form: constant grids interpolate to the exact constant.
    const double f00 = sigma[i * ns + j];
    const double f01 = sigma[i * ns + j + 1];
    const double f10 = sigma[(i + 1) * ns + j];
    const double f11 = sigma[(i + 1) * ns + j + 1];
    return f00 + tx * (f01 - f00) + ty * (f10 - f00) + tx * ty * (f11 - f10 - f01 + f00);
}

LocalVolGrid LocalVolGrid::constant(const Mesh& mesh, double vol) {
    if (!(vol >= 0.0)) throw DomainError("LocalVolGrid: vol must be nonnegative");
    LocalVolGrid g;
    g.times = mesh.times;
    g.prices = mesh.prices;
    g.log_prices.resize(mesh.prices.size());
    for (std::size_t j = 0; j < g.prices.size(); ++j) g.log_prices[j] = std::log(g.prices[j]);
    g.sigma.assign(g.times.size() * g.prices.size(), vol);
    return g;
}

LocalVolGrid build_localvol_grid(const ImpliedSurface& surf, const Mesh& mesh,
                                 const DupireParams& params, Exec exec) {
    LocalVolGrid g;
    g.times = mesh.times;
    g.prices = mesh.prices;
    g.log_prices.resize(mesh.prices.size());
    for (std::size_t j = 0; j < g.prices.size(); ++j) g.log_prices[j] = std::log(g.prices[j]);
    const std::size_t nt = g.times.size(), ns = g.prices.size();
    g.sigma.assign(nt * ns, 0.0);

    // Rate data depends on the row only.
    std::vector<double> r_row(nt), q_row(nt), irq_row(nt);
    for (std::size_t i = 0; i < nt; ++i) {
        const double t = g.times[i];
        r_row[i] = surf.dom_curve().instantaneous(t);
        q_row[i] = surf.for_curve().instantaneous(t);
        irq_row[i] = surf.dom_curve().integral(t) - surf.for_curve().integral(t);
    }

    const double spot = surf.spot();
    parallel_for(exec, static_cast<std::ptrdiff_t>(ns), [&](std::ptrdiff_t j) {
        const double strike = g.prices[static_cast<std::size_t>(j)];
        const ImpliedSurface::StrikeSection sect = surf.section(strike);
        for (std::size_t i = 0; i < nt; ++i) {
            g.sigma[i * ns + static_cast<std::size_t>(j)] =
                dupire_local_vol(sect.at(g.times[i]), spot, strike, g.times[i], r_row[i],
                                 q_row[i], irq_row[i], params);
        }
    });
    return g;
}

}  // namespace fxlv
