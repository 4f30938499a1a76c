#pragma once

#include <vector>

#include "fxlv/cubic_spline.hpp"
#include "fxlv/market_data.hpp"
#include "fxlv/mesh.hpp"
#include "fxlv/parallel.hpp"

namespace fxlv {

// Implied-vol surface interpolated from the per-tenor smiles. Construction
// fits one natural cubic spline per tenor through that tenor's five
// (strike, vol) calibration points. A query at (K, T) then runs in the
// maturity direction: three more natural splines through the tenor values
// y_i(K), slopes y_i'(K) and curvatures y_i''(K), so that
//   theta   = u(T)     (through y_i(K))
//   d theta / dK   = z(T)  (through y_i'(K))
//   d2 theta / dK2 = w(T)  (through y_i''(K))
//   d theta / dT   = u'(T)
// All splines extend linearly beyond their knots.
class ImpliedSurface {
public:
    struct Derivs {
        double theta;  // implied vol at (K, T)
        double d_t;    // d theta / d maturity
        double d_k;    // d theta / d strike
        double d_kk;   // d2 theta / d strike2
    };

    // Fixed-strike view: the three maturity splines for one K, reusable across
    // many maturities. Grid construction walks one of these per mesh column.
    class StrikeSection {
    public:
        Derivs at(double maturity) const;

    private:
        friend class ImpliedSurface;
        CubicSpline value_, slope_, curvature_;
    };

    explicit ImpliedSurface(const MarketSnapshot& snap);

    StrikeSection section(double strike) const;
    Derivs theta_and_derivs(double strike, double maturity) const;

    double spot() const { return spot_; }
    const ZeroCurve& dom_curve() const { return dom_; }
    const ZeroCurve& for_curve() const { return for_; }
    double mean_atm_vol() const { return mean_atm_; }
    const std::vector<double>& tenors() const { return tenors_; }
    // Extremes of the quoted calibration strikes across all tenors.
    double min_strike() const { return min_strike_; }
    double max_strike() const { return max_strike_; }

private:
    double spot_ = 0.0;
    double mean_atm_ = 0.0;
    double min_strike_ = 0.0;
    double max_strike_ = 0.0;
    ZeroCurve dom_, for_;
    std::vector<double> tenors_;
    std::vector<CubicSpline> smiles_;  // strike spline per tenor
};

struct DupireParams {
    double sigma_cap = 5.0;     // ceiling on the local vol
    double denom_floor = 1e-12;  // denominators below this return the cap
};

// Local volatility from the implied surface in implied-vol form. With
// d1 sqrt(T) = (ln(S0/K) + int_rq + theta^2 T / 2) / theta the local variance
// is
//        theta^2 + 2 theta T d_t + 2 (r - q) K theta T d_k
//   ---------------------------------------------------------------
//   (1 + K d_k d1rt)^2 + K^2 theta T (d_kk - d1rt d_k^2)
// which only ever uses d1 through d1 sqrt(T), so T = 0 evaluates directly to
// the short-maturity limit. Negative local variance clamps to 0, a vanishing
// or negative denominator returns sigma_cap; both bump a warning counter.
// r and q are the instantaneous rates at T, int_rq = int_0^T (r - q) dt.
double dupire_local_vol(const ImpliedSurface::Derivs& d, double spot, double strike,
                        double maturity, double r, double q, double int_rq,
                        const DupireParams& params = {});
double dupire_local_vol(const ImpliedSurface& surf, double strike, double maturity,
                        const DupireParams& params = {});

// Local vols pre-evaluated on a mesh: sigma[i * (m+1) + j] for time node i and
// price node j. lookup() interpolates bilinearly in (log-price, time) and
// clamps coordinates to the grid edges, counting each clamp.
struct LocalVolGrid {
    std::vector<double> times;
    std::vector<double> prices;
    std::vector<double> log_prices;
    std::vector<double> sigma;

    double at(std::size_t i, std::size_t j) const { return sigma[i * prices.size() + j]; }
    double lookup(double s, double t) const;

    static LocalVolGrid constant(const Mesh& mesh, double vol);
};

// Evaluates Dupire on every mesh node. Columns are independent, so the
// parallel path splits them across threads; results are identical to the
// serial reference by construction.
LocalVolGrid build_localvol_grid(const ImpliedSurface& surf, const Mesh& mesh,
                                 const DupireParams& params = {}, Exec exec = Exec::serial);

}  // namespace fxlv
