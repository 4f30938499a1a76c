#include "fxlv/market_data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "fxlv/errors.hpp"
#include "fxlv/io_util.hpp"
#include "fxlv/warnings.hpp"

namespace fxlv {

namespace {

void check_pillars(const std::vector<double>& tenors, std::size_t values, const char* what) {
    if (tenors.empty()) throw ConfigError(std::string(what) + ": empty curve");
    if (tenors.size() != values) throw DomainError(std::string(what) + ": pillar count mismatch");
    if (tenors.front() <= 0.0) throw DataError(std::string(what) + ": tenors must be positive");
    for (std::size_t i = 0; i + 1 < tenors.size(); ++i)
        if (!(tenors[i] < tenors[i + 1]))
            throw DataError(std::string(what) + ": tenors not increasing");
}

// Shared piecewise-constant forward machinery for rates and variances:
// given pillar levels g_i quoted at T_i for the average of f over [0, T_i],
// the forward value on (T_{i-1}, T_i] is (g_i T_i - g_{i-1} T_{i-1}) / dT.
struct ForwardTable {
    std::vector<double> fwd, cum;
};

ForwardTable build_forwards(const std::vector<double>& t, const std::vector<double>& level) {
    ForwardTable out;
    const std::size_t n = t.size();
    out.fwd.resize(n);
    out.cum.resize(n);
    out.fwd[0] = level[0];
    out.cum[0] = level[0] * t[0];
    for (std::size_t i = 1; i < n; ++i) {
        out.fwd[i] = (level[i] * t[i] - level[i - 1] * t[i - 1]) / (t[i] - t[i - 1]);
        out.cum[i] = out.cum[i - 1] + out.fwd[i] * (t[i] - t[i - 1]);
    }
    return out;
}

std::size_t segment(const std::vector<double>& t, double x) {
    // First pillar index with t >= x; beyond the last pillar returns n-1.
    const auto it = std::lower_bound(t.begin(), t.end(), x);
    if (it == t.end()) return t.size() - 1;
    return static_cast<std::size_t>(it - t.begin());
}

double table_integral(const std::vector<double>& t, const std::vector<double>& fwd,
                      const std::vector<double>& cum, double x) {
    if (x < 0.0) throw DomainError("curve integral: time must be nonnegative");
    if (x == 0.0) return 0.0;
    if (x > t.back()) return cum.back() + fwd.back() * (x - t.back());
    const std::size_t i = segment(t, x);
    const double base = i == 0 ? 0.0 : cum[i - 1];
    const double t0 = i == 0 ? 0.0 : t[i - 1];
    return base + fwd[i] * (x - t0);
}

double table_instantaneous(const std::vector<double>& t, const std::vector<double>& fwd,
                           double x) {
    if (x < 0.0) throw DomainError("curve lookup: time must be nonnegative");
    return fwd[segment(t, x)];
}

}  // namespace

ZeroCurve::ZeroCurve(std::vector<double> tenors, std::vector<double> zeros) : t_(std::move(tenors)) {
    check_pillars(t_, zeros.size(), "zero curve");
    ForwardTable f = build_forwards(t_, zeros);
    fwd_ = std::move(f.fwd);
    cum_ = std::move(f.cum);
}

double ZeroCurve::instantaneous(double t) const {
    if (empty()) throw ConfigError("zero curve: empty curve");
    return table_instantaneous(t_, fwd_, t);
}

double ZeroCurve::integral(double t) const {
    if (empty()) throw ConfigError("zero curve: empty curve");
    return table_integral(t_, fwd_, cum_, t);
}

double ZeroCurve::average(double t) const {
    if (!(t > 0.0)) throw DomainError("zero curve average: time must be positive");
    return integral(t) / t;
}

VolTermStructure::VolTermStructure(std::vector<double> tenors, std::vector<double> vols)
    : t_(std::move(tenors)) {
    check_pillars(t_, vols.size(), "vol term structure");
    std::vector<double> var(vols.size());
    for (std::size_t i = 0; i < vols.size(); ++i) {
        if (!(vols[i] > 0.0)) throw DataError("vol term structure: vols must be positive");
        var[i] = vols[i] * vols[i];
    }
    ForwardTable f = build_forwards(t_, var);
    for (double& v : f.fwd)
        if (v < 0.0) {
            v = 0.0;
            warnings::bump(warnings::Kind::negative_forward_variance);
        }
    // Rebuild the cumulative integral from the clamped forwards.
    f.cum[0] = f.fwd[0] * t_[0];
    for (std::size_t i = 1; i < t_.size(); ++i)
        f.cum[i] = f.cum[i - 1] + f.fwd[i] * (t_[i] - t_[i - 1]);
    fvar_ = std::move(f.fwd);
    cum_ = std::move(f.cum);
}

double VolTermStructure::instantaneous(double t) const {
    if (t_.empty()) throw ConfigError("vol term structure: empty curve");
    return std::sqrt(table_instantaneous(t_, fvar_, t));
}

double VolTermStructure::average(double t) const {
    if (!(t > 0.0)) throw DomainError("vol term structure average: time must be positive");
    if (t_.empty()) throw ConfigError("vol term structure: empty curve");
    return std::sqrt(table_integral(t_, fvar_, cum_, t) / t);
}

ZeroCurve MarketSnapshot::dom_curve() const {
    std::vector<double> t, g;
    for (const TenorQuote& q : quotes) t.push_back(q.tenor_years), g.push_back(q.dom_zero);
    return ZeroCurve(std::move(t), std::move(g));
}

ZeroCurve MarketSnapshot::for_curve() const {
    std::vector<double> t, g;
    for (const TenorQuote& q : quotes) t.push_back(q.tenor_years), g.push_back(q.for_zero);
    return ZeroCurve(std::move(t), std::move(g));
}

VolTermStructure MarketSnapshot::atm_structure() const {
    std::vector<double> t, v;
    for (const TenorQuote& q : quotes) t.push_back(q.tenor_years), v.push_back(q.atm);
    return VolTermStructure(std::move(t), std::move(v));
}

double MarketSnapshot::mean_atm_vol() const {
    if (quotes.empty()) throw DataError("snapshot " + date + ": no quotes");
    double sum = 0.0;
    for (const TenorQuote& q : quotes) sum += q.atm;
    return sum / static_cast<double>(quotes.size());
}

const TenorQuote& MarketSnapshot::quote_at(double tenor_years) const {
    for (const TenorQuote& q : quotes)
        if (std::fabs(q.tenor_years - tenor_years) < 1e-9) return q;
    throw DataError("snapshot " + date + ": no quote at tenor " + fmt_double(tenor_years));
}

const char* label_name(SmileLabel label) {
    switch (label) {
        case SmileLabel::p10: return "p10";
        case SmileLabel::p25: return "p25";
        case SmileLabel::atm: return "atm";
        case SmileLabel::c25: return "c25";
        case SmileLabel::c10: return "c10";
    }
    return "?";
}

double SmileVols::operator[](SmileLabel label) const {
    switch (label) {
        case SmileLabel::p10: return p10;
        case SmileLabel::p25: return p25;
        case SmileLabel::atm: return atm;
        case SmileLabel::c25: return c25;
        case SmileLabel::c10: return c10;
    }
    return atm;
}

SmileVols smile_vols(const TenorQuote& q) {
    SmileVols v{q.atm + q.fly10 - 0.5 * q.rr10, q.atm + q.fly25 - 0.5 * q.rr25, q.atm,
                q.atm + q.fly25 + 0.5 * q.rr25, q.atm + q.fly10 + 0.5 * q.rr10};
    for (double s : {v.p10, v.p25, v.atm, v.c25, v.c10})
        if (!(s > 0.0))
            throw DataError("smile vols: non-positive vol at tenor " + fmt_double(q.tenor_years));
    return v;
}

double strike_from_delta(double spot, double maturity, double rd, double rf, double vol,
                         double target, OptionSide side) {
    if (!(spot > 0.0) || !(maturity > 0.0) || !(vol > 0.0))
        throw DomainError("strike_from_delta: need positive spot, maturity, vol");
    const double dff = std::exp(-rf * maturity);
    double call_target;
    if (side == OptionSide::call) {
        if (!(target > 0.0 && target < dff))
            throw DomainError("strike_from_delta: call delta outside (0, e^{-rf T})");
        call_target = target;
    } else {
        if (!(target < 0.0 && target > -dff))
            throw DomainError("strike_from_delta: put delta outside (-e^{-rf T}, 0)");
        call_target = dff + target;  // put delta = call delta - e^{-rf T}
    }
    const double d1 = bs::norm_inv_cdf(call_target / dff);
    return spot * std::exp((rd - rf + 0.5 * vol * vol) * maturity -
                           vol * std::sqrt(maturity) * d1);
}

double atm_strike(double spot, double maturity, double rd, double rf, double vol) {
    if (!(spot > 0.0) || !(maturity > 0.0) || !(vol > 0.0))
        throw DomainError("atm_strike: need positive spot, maturity, vol");
    return spot * std::exp((rd - rf + 0.5 * vol * vol) * maturity);
}

std::array<SmilePoint, 5> smile_points(const MarketSnapshot& snap, const TenorQuote& q) {
    const SmileVols v = smile_vols(q);
    const double T = q.tenor_years;
    const double rd = snap.dom_curve().average(T);
    const double rf = snap.for_curve().average(T);
    std::array<SmilePoint, 5> pts{
        SmilePoint{strike_from_delta(snap.spot, T, rd, rf, v.p10, -0.10, OptionSide::put), v.p10},
        SmilePoint{strike_from_delta(snap.spot, T, rd, rf, v.p25, -0.25, OptionSide::put), v.p25},
        SmilePoint{atm_strike(snap.spot, T, rd, rf, v.atm), v.atm},
        SmilePoint{strike_from_delta(snap.spot, T, rd, rf, v.c25, 0.25, OptionSide::call), v.c25},
        SmilePoint{strike_from_delta(snap.spot, T, rd, rf, v.c10, 0.10, OptionSide::call), v.c10}};
    for (int i = 0; i + 1 < 5; ++i)
        if (!(pts[i].strike < pts[i + 1].strike))
            throw DataError("smile strikes not increasing at tenor " + fmt_double(T) +
                            " on " + snap.date);
    return pts;
}

namespace {

constexpr const char* kQuoteCols[7] = {"atm", "rr25", "rr10", "fly25", "fly10", "dom_zero",
                                       "for_zero"};

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
    static const int d[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    return m == 2 && is_leap(y) ? 29 : d[m - 1];
}

void validate_date(const std::string& iso) {
    if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-')
        throw ParseError("bad date '" + iso + "' (want YYYY-MM-DD)");
    for (int i : {0, 1, 2, 3, 5, 6, 8, 9})
        if (iso[i] < '0' || iso[i] > '9') throw ParseError("bad date '" + iso + "'");
    const int m = std::stoi(iso.substr(5, 2));
    const int d = std::stoi(iso.substr(8, 2));
    const int y = std::stoi(iso.substr(0, 4));
    if (m < 1 || m > 12 || d < 1 || d > days_in_month(y, m))
        throw ParseError("bad date '" + iso + "'");
}

}  // namespace

int date_to_days(const std::string& iso) {
    validate_date(iso);
    // Civil-from-days counting with the usual March-based year shift.
    int y = std::stoi(iso.substr(0, 4));
    const int m = std::stoi(iso.substr(5, 2));
    const int d = std::stoi(iso.substr(8, 2));
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<int>(doe) - 719468;
}

std::string days_to_date(int days) {
    int z = days + 719468;
    const int era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int y = static_cast<int>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", y + (m <= 2), m, d);
    return buf;
}

std::vector<MarketSnapshot> parse_history(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("line 1: missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto head = split_csv(line);
    if (head.size() < 9 || head[0] != "date" || head[1] != "spot" ||
        (head.size() - 2) % 7 != 0)
        throw ParseError("line 1: header must be date,spot then 7 columns per tenor");

    const std::size_t n_tenors = (head.size() - 2) / 7;
    std::vector<double> tenors(n_tenors);
    for (std::size_t t = 0; t < n_tenors; ++t) {
        for (std::size_t c = 0; c < 7; ++c) {
            const std::string_view col = head[2 + t * 7 + c];
            const std::string want = std::string(kQuoteCols[c]) + "_";
            if (col.substr(0, want.size()) != want)
                throw ParseError("line 1: expected column '" + want + "<tenor>', got '" +
                                 std::string(col) + "'");
            const double ty = parse_double(col.substr(want.size()), 1);
            if (c == 0)
                tenors[t] = ty;
            else if (std::fabs(ty - tenors[t]) > 1e-12)
                throw ParseError("line 1: tenor mismatch within group at '" + std::string(col) +
                                 "'");
        }
        if (!(tenors[t] > 0.0) || (t > 0 && !(tenors[t] > tenors[t - 1])))
            throw DataError("header tenors not increasing");
    }

    std::vector<MarketSnapshot> days;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split_csv(line);
        if (cells.size() != head.size())
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(head.size()) + " columns, got " +
                             std::to_string(cells.size()));
        MarketSnapshot snap;
        snap.date = std::string(cells[0]);
        try {
            validate_date(snap.date);
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
        snap.spot = parse_double(cells[1], line_no);
        if (!(snap.spot > 0.0))
            throw DataError("line " + std::to_string(line_no) + ": spot must be positive");
        snap.quotes.resize(n_tenors);
        for (std::size_t t = 0; t < n_tenors; ++t) {
            TenorQuote& q = snap.quotes[t];
            q.tenor_years = tenors[t];
            const std::size_t base = 2 + t * 7;
            q.atm = parse_double(cells[base + 0], line_no);
            q.rr25 = parse_double(cells[base + 1], line_no);
            q.rr10 = parse_double(cells[base + 2], line_no);
            q.fly25 = parse_double(cells[base + 3], line_no);
            q.fly10 = parse_double(cells[base + 4], line_no);
            q.dom_zero = parse_double(cells[base + 5], line_no);
            q.for_zero = parse_double(cells[base + 6], line_no);
            if (!(q.atm > 0.0))
                throw DataError("line " + std::to_string(line_no) + ": atm vol must be positive");
        }
        days.push_back(std::move(snap));
    }
    if (days.empty()) throw DataError("history has no data rows");

    std::sort(days.begin(), days.end(),
              [](const MarketSnapshot& a, const MarketSnapshot& b) { return a.date < b.date; });
    for (std::size_t i = 0; i + 1 < days.size(); ++i)
        if (days[i].date == days[i + 1].date)
            throw DataError("duplicate date " + days[i].date);
    return days;
}

std::vector<MarketSnapshot> load_history(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open input file '" + path + "'");
    return parse_history(in);
}

double parse_tenor_token(const std::string& token) {
    if (token.empty()) throw ConfigError("empty tenor");
    double unit = 0.0;
    switch (token.back()) {
        case 'w': unit = 1.0 / 52.0; break;
        case 'm': unit = 1.0 / 12.0; break;
        case 'y': unit = 1.0; break;
        default: unit = 0.0; break;
    }
    const std::string num = unit != 0.0 ? token.substr(0, token.size() - 1) : token;
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(num, &used);
    } catch (const std::exception&) {
        throw ConfigError("bad tenor '" + token + "' (want e.g. 1w, 3m, 2y or a year fraction)");
    }
    if (used != num.size() || !(value > 0.0))
        throw ConfigError("bad tenor '" + token + "' (want e.g. 1w, 3m, 2y or a year fraction)");
    return unit != 0.0 ? value * unit : value;
}

void write_history(std::ostream& out, const std::vector<MarketSnapshot>& days) {
    if (days.empty()) throw DataError("write_history: no rows");
    out << "date,spot";
    for (const TenorQuote& q : days.front().quotes)
        for (const char* col : kQuoteCols) out << ',' << col << '_' << fmt_double(q.tenor_years);
    out << '\n';
    for (const MarketSnapshot& snap : days) {
        out << snap.date << ',' << fmt_double(snap.spot);
        for (const TenorQuote& q : snap.quotes) {
            out << ',' << fmt_double(q.atm) << ',' << fmt_double(q.rr25) << ','
                << fmt_double(q.rr10) << ',' << fmt_double(q.fly25) << ',' << fmt_double(q.fly10)
                << ',' << fmt_double(q.dom_zero) << ',' << fmt_double(q.for_zero);
        }
        out << '\n';
    }
}

}  // namespace fxlv
