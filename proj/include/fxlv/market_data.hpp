#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "fxlv/black_scholes.hpp"

namespace fxlv {

// One tenor's worth of FX vol quotes plus the two zero rates. Vols and rates
// are fractions (0.1085 = 10.85%). rr/fly follow the usual convention:
// rr = call vol - put vol, fly = wing average - atm.
struct TenorQuote {
    double tenor_years = 0.0;
    double atm = 0.0;
    double rr25 = 0.0;
    double rr10 = 0.0;
    double fly25 = 0.0;
    double fly10 = 0.0;
    double dom_zero = 0.0;
    double for_zero = 0.0;
};

// Zero-coupon curve gamma(t) quoted at pillar tenors. t * gamma(t) is
// interpolated piecewise linearly through (0, gamma_1), (T_1, gamma_1), ...,
// which makes the instantaneous rate piecewise constant:
//   r(t) = gamma_1 on [0, T_1]
//   r(t) = (gamma_{i+1} T_{i+1} - gamma_i T_i) / (T_{i+1} - T_i) on (T_i, T_{i+1}]
// Beyond the last pillar the last instantaneous rate is held.
class ZeroCurve {
public:
    ZeroCurve() = default;
    ZeroCurve(std::vector<double> tenors, std::vector<double> zeros);

    double instantaneous(double t) const;
    // integral(t) = int_0^t r(u) du; integral(T_i) recovers gamma_i * T_i.
    double integral(double t) const;
    // average(t) = integral(t) / t; requires t > 0.
    double average(double t) const;

    bool empty() const { return t_.empty(); }

private:
    std::vector<double> t_;
    std::vector<double> fwd_;  // fwd_[i] = instantaneous rate on (t_{i-1}, t_i]
    std::vector<double> cum_;  // cum_[i] = integral up to t_[i]
};

// ATM vol term structure: same construction as ZeroCurve but in variance, so
// sigma(t)^2 is piecewise constant and average(t)^2 * t is the integrated
// variance. Negative forward variances are clamped to zero with a warning.
class VolTermStructure {
public:
    VolTermStructure() = default;
    VolTermStructure(std::vector<double> tenors, std::vector<double> vols);

    double instantaneous(double t) const;
    double average(double t) const;

private:
    std::vector<double> t_;
    std::vector<double> fvar_;  // forward variance on (t_{i-1}, t_i]
    std::vector<double> cum_;   // integrated variance up to t_[i]
};

struct MarketSnapshot {
    std::string date;  // ISO YYYY-MM-DD
    double spot = 0.0;
    std::vector<TenorQuote> quotes;  // ascending tenor_years

    ZeroCurve dom_curve() const;
    ZeroCurve for_curve() const;
    VolTermStructure atm_structure() const;
    // Arithmetic mean of the ATM pillar vols; sets the mesh width.
    double mean_atm_vol() const;
    const TenorQuote& quote_at(double tenor_years) const;
};

enum class SmileLabel { p10, p25, atm, c25, c10 };
const char* label_name(SmileLabel label);

struct SmileVols {
    double p10, p25, atm, c25, c10;
    double operator[](SmileLabel label) const;
};

// Reconstructs the five smile vols from atm/rr/fly:
//   wing put vol  = atm + fly - rr/2
//   wing call vol = atm + fly + rr/2
// Throws DataError naming the tenor if any vol comes out non-positive.
SmileVols smile_vols(const TenorQuote& q);

// Strike with the given Black-Scholes spot delta. target is signed: calls in
// (0, e^{-rf T}), puts in (-e^{-rf T}, 0). rd and rf are period-average rates
// over [0, T]. Closed form through the normal quantile.
double strike_from_delta(double spot, double maturity, double rd, double rf, double vol,
                         double target, OptionSide side);

// Delta-neutral straddle strike (d1 = 0): spot * exp((rd - rf + vol^2/2) T).
double atm_strike(double spot, double maturity, double rd, double rf, double vol);

struct SmilePoint {
    double strike;
    double vol;
};

// The five calibration points of one tenor, strikes solved from the deltas
// (10d put, 25d put, ATM, 25d call, 10d call). Strikes must come out strictly
// increasing or the quote is rejected as a DataError.
std::array<SmilePoint, 5> smile_points(const MarketSnapshot& snap, const TenorQuote& q);

// History CSV. Header declares the tenor grid as year fractions:
//   date,spot,atm_<T1>,rr25_<T1>,rr10_<T1>,fly25_<T1>,fly10_<T1>,dom_zero_<T1>,for_zero_<T1>,atm_<T2>,...
// then one row per trading day. Rows are sorted by date after parsing;
// duplicate dates are rejected. Parse failures carry the 1-based line number.
std::vector<MarketSnapshot> parse_history(std::istream& in);
std::vector<MarketSnapshot> load_history(const std::string& path);
void write_history(std::ostream& out, const std::vector<MarketSnapshot>& days);

// Calendar helpers for expiry counting: days since 1970-01-01.
int date_to_days(const std::string& iso);
std::string days_to_date(int days);

// Tenor tokens: "2w" -> 2/52, "3m" -> 3/12, "5y" -> 5, bare numbers taken as
// year fractions. Anything else is a ConfigError.
double parse_tenor_token(const std::string& token);

}  // namespace fxlv
