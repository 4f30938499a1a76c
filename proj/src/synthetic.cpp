#include "fxlv/synthetic.hpp"

#include <cmath>
#include <random>

#include "fxlv/errors.hpp"

namespace fxlv {

std::vector<double> SyntheticConfig::standard_tenors() {
    return {1.0 / 52, 1.0 / 12, 2.0 / 12, 3.0 / 12, 6.0 / 12, 1.0, 2.0, 3.0, 4.0, 5.0};
}

std::vector<MarketSnapshot> make_history(const SyntheticConfig& cfg) {
    if (cfg.days < 1) throw ConfigError("make_history: need at least one day");
    if (!(cfg.spot > 0.0) || !(cfg.atm_vol > 0.0) || !(cfg.realized_vol >= 0.0))
        throw ConfigError("make_history: spot and vols must be positive");
    if (cfg.tenors.size() < 2) throw ConfigError("make_history: need at least two tenors");

    const double dt = 1.0 / 365.0;  // consecutive calendar days
    const double sqdt = std::sqrt(dt);
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> normal;

    std::vector<MarketSnapshot> days(cfg.days);
    const int day0 = date_to_days(cfg.start_date);
    double spot = cfg.spot;
    for (int d = 0; d < cfg.days; ++d) {
        MarketSnapshot& snap = days[d];
        snap.date = days_to_date(day0 + d);
        snap.spot = spot;
        snap.quotes.reserve(cfg.tenors.size());
        for (double t : cfg.tenors) {
            TenorQuote q;
            q.tenor_years = t;
            q.atm = cfg.atm_vol;
            q.dom_zero = cfg.dom_rate;
            q.for_zero = cfg.for_rate;
            snap.quotes.push_back(q);
        }
        spot *= std::exp((cfg.drift - 0.5 * cfg.realized_vol * cfg.realized_vol) * dt +
                         cfg.realized_vol * sqdt * normal(rng));
    }
    return days;
}

}  // namespace fxlv
