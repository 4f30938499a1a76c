#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>
#include <string>

#include "fxlv/errors.hpp"
#include "fxlv/implied_surface.hpp"
#include "fxlv/market_data.hpp"
#include "fxlv/mesh.hpp"
#include "fxlv/warnings.hpp"

using namespace fxlv;
using Catch::Matchers::WithinAbs;

namespace {

TenorQuote flat_quote(double tenor, double atm, double rd, double rf) {
    TenorQuote q;
    q.tenor_years = tenor;
    q.atm = atm;
    q.dom_zero = rd;
    q.for_zero = rf;
    return q;
}

MarketSnapshot flat_snapshot(double spot, double atm, double rd, double rf) {
    MarketSnapshot snap;
    snap.date = "2020-01-06";
    snap.spot = spot;
    for (double t : {1.0 / 52, 1.0 / 12, 2.0 / 12, 0.25, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0})
        snap.quotes.push_back(flat_quote(t, atm, rd, rf));
    return snap;
}

}  // namespace

TEST_CASE("flat quotes give a flat local vol", "[surface]") {
    // Nonzero rates on purpose: the rate terms cancel when the smile is flat.
    const ImpliedSurface surf(flat_snapshot(0.7735, 0.10, 0.048, 0.032));
    std::mt19937 rng(20240521);
    std::uniform_real_distribution<double> logk(-0.30, 0.30);
    std::uniform_real_distribution<double> mat(0.001, 5.5);
    for (int i = 0; i < 200; ++i) {
        const double k = 0.7735 * std::exp(logk(rng));
        CHECK_THAT(dupire_local_vol(surf, k, mat(rng)), WithinAbs(0.10, 1e-12));
    }
    CHECK_THAT(dupire_local_vol(surf, 0.7735, 0.0), WithinAbs(0.10, 1e-12));
}

TEST_CASE("two flat tenors reproduce the hand-derived local vol", "[surface]") {
    MarketSnapshot snap;
    snap.date = "2020-01-06";
    snap.spot = 1.0;
    snap.quotes = {flat_quote(1.0, 0.10, 0.0, 0.0), flat_quote(2.0, 0.12, 0.0, 0.0)};
    const ImpliedSurface surf(snap);

    // Two knots make the maturity spline a straight line, so at the spot:
    // theta = 0.11, d theta/dT = 0.02, smile derivatives vanish, and
    // sigma^2 = theta^2 + 2 theta T theta_T = 0.0187.
    const auto d = surf.theta_and_derivs(1.0, 1.5);
    CHECK_THAT(d.theta, WithinAbs(0.11, 1e-14));
    CHECK_THAT(d.d_t, WithinAbs(0.02, 1e-14));
    CHECK_THAT(d.d_k, WithinAbs(0.0, 1e-12));
    CHECK_THAT(d.d_kk, WithinAbs(0.0, 1e-12));
    const double lv = dupire_local_vol(surf, 1.0, 1.5);
    CHECK_THAT(lv, WithinAbs(0.13674794331177342, 1e-12));

    // The same inputs seen as an ATM term structure give the forward vol;
    // the two agree to well under five percent at the spot.
    const VolTermStructure ts({1.0, 2.0}, {0.10, 0.12});
    CHECK(std::fabs(lv - ts.instantaneous(1.5)) / ts.instantaneous(1.5) < 0.05);
    CHECK_THAT(ts.instantaneous(1.5), WithinAbs(0.13711309200802088, 1e-14));
}

TEST_CASE("surface derivatives match finite differences", "[surface]") {
    const auto days = load_history(std::string(FXLV_DATA_DIR) + "/snapshot_2005-04-12.csv");
    const ImpliedSurface surf(days.front());
    for (double k : {0.70, 0.7735, 0.80, 0.85})
        for (double t : {0.4, 0.7, 1.5, 2.5}) {
            const auto d = surf.theta_and_derivs(k, t);
            const double hk = 1e-4 * k;
            const double up = surf.theta_and_derivs(k + hk, t).theta;
            const double dn = surf.theta_and_derivs(k - hk, t).theta;
            CHECK_THAT(d.d_k, WithinAbs((up - dn) / (2 * hk), 1e-6));
            CHECK_THAT(d.d_kk, WithinAbs((up - 2 * d.theta + dn) / (hk * hk), 5e-4));
            const double ht = 1e-5;
            CHECK_THAT(d.d_t, WithinAbs((surf.theta_and_derivs(k, t + ht).theta -
                                         surf.theta_and_derivs(k, t - ht).theta) /
                                            (2 * ht),
                                        1e-6));
        }
}

TEST_CASE("strike sections agree with direct queries", "[surface]") {
    const auto days = load_history(std::string(FXLV_DATA_DIR) + "/snapshot_2005-04-12.csv");
    const ImpliedSurface surf(days.front());
    for (double k : {0.68, 0.7735, 0.88}) {
        const auto sec = surf.section(k);
        for (double t : {0.0, 0.3, 1.0, 4.9, 6.0}) {
            const auto a = sec.at(t);
            const auto b = surf.theta_and_derivs(k, t);
            CHECK(a.theta == b.theta);
            CHECK(a.d_t == b.d_t);
            CHECK(a.d_k == b.d_k);
            CHECK(a.d_kk == b.d_kk);
        }
    }
}

TEST_CASE("local vol clamps and caps", "[surface]") {
    ImpliedSurface::Derivs d{};
    d.theta = 0.10;

    warnings::reset();
    // Strongly negative calendar term drives the variance negative.
    d.d_t = -1.0;
    CHECK(dupire_local_vol(d, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0) == 0.0);
    CHECK(warnings::count(warnings::Kind::negative_local_variance) == 1);

    // Curvature chosen to zero out the denominator.
    d.d_t = 0.0;
    d.d_kk = -1.0 / (0.10 * 1.0);
    CHECK(dupire_local_vol(d, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0) == 5.0);
    CHECK(warnings::count(warnings::Kind::capped_local_vol) == 1);

    // Custom cap is honored.
    DupireParams params;
    params.sigma_cap = 2.5;
    CHECK(dupire_local_vol(d, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, params) == 2.5);

    // Non-positive theta short-circuits to zero vol.
    d = ImpliedSurface::Derivs{};
    d.theta = -0.05;
    CHECK(dupire_local_vol(d, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0) == 0.0);

    // Zero maturity evaluates the short-end limit directly.
    d = ImpliedSurface::Derivs{};
    d.theta = 0.12;
    d.d_k = 0.05;
    CHECK_THAT(dupire_local_vol(d, 1.0, 1.05, 0.0, 0.0, 0.0, 0.0),
               WithinAbs(0.12 / std::fabs(1.0 + 1.05 * 0.05 * std::log(1.0 / 1.05) / 0.12),
                         1e-12));
}

TEST_CASE("local vol grid over the reference smile", "[surface]") {
    const auto days = load_history(std::string(FXLV_DATA_DIR) + "/snapshot_2005-04-12.csv");
    const ImpliedSurface surf(days.front());
    const Mesh mesh = build_mesh(surf.spot(), 1.0, surf.mean_atm_vol());
    const LocalVolGrid grid = build_localvol_grid(surf, mesh);

    REQUIRE(grid.times.size() == static_cast<std::size_t>(mesh.n + 1));
    REQUIRE(grid.prices.size() == static_cast<std::size_t>(mesh.m + 1));
    REQUIRE(grid.sigma.size() == grid.times.size() * grid.prices.size());
    CHECK(grid.prices == mesh.prices);
    CHECK(grid.times == mesh.times);

    for (double s : grid.sigma) {
        CHECK(std::isfinite(s));
        CHECK(s >= 0.0);
        CHECK(s <= 5.0);
    }
    // At-the-money column stays in a sane band for a ~10 percent market.
    const std::size_t mid = static_cast<std::size_t>(mesh.m / 2);
    for (std::size_t i = 0; i < grid.times.size(); ++i) {
        CHECK(grid.at(i, mid) > 0.05);
        CHECK(grid.at(i, mid) < 0.20);
    }
}

TEST_CASE("grid lookup interpolates bilinearly and clamps edges", "[surface]") {
    LocalVolGrid g;
    g.times = {0.0, 1.0};
    g.prices = {1.0, 2.0};
    g.log_prices = {0.0, std::log(2.0)};
    g.sigma = {0.10, 0.20, 0.30, 0.40};  // rows: t=0 then t=1

    CHECK(g.at(0, 1) == 0.20);
    CHECK(g.at(1, 0) == 0.30);
    CHECK_THAT(g.lookup(1.0, 0.0), WithinAbs(0.10, 1e-15));
    CHECK_THAT(g.lookup(2.0, 1.0), WithinAbs(0.40, 1e-15));
    // Midpoint in log-price and time averages all four corners.
    CHECK_THAT(g.lookup(std::sqrt(2.0), 0.5), WithinAbs(0.25, 1e-12));
    CHECK_THAT(g.lookup(std::sqrt(2.0), 0.0), WithinAbs(0.15, 1e-12));

    warnings::reset();
    CHECK_THAT(g.lookup(5.0, 0.0), WithinAbs(0.20, 1e-15));
    CHECK_THAT(g.lookup(0.5, 2.0), WithinAbs(0.30, 1e-15));
    CHECK(warnings::count(warnings::Kind::sim_edge_clamp) == 2);
}

TEST_CASE("constant grid matches its vol everywhere", "[surface]") {
    const Mesh mesh = build_mesh(1.0, 0.5, 0.10);
    const LocalVolGrid g = LocalVolGrid::constant(mesh, 0.2);
    CHECK(g.sigma.size() == static_cast<std::size_t>((mesh.n + 1) * (mesh.m + 1)));
    CHECK(g.at(0, 0) == 0.2);
    CHECK(g.lookup(1.0, 0.25) == 0.2);
}

TEST_CASE("surface construction rejects thin quote sets", "[surface]") {
    MarketSnapshot snap;
    snap.date = "2020-01-06";
    snap.spot = 1.0;
    snap.quotes = {flat_quote(1.0, 0.10, 0.0, 0.0)};
    CHECK_THROWS_AS(ImpliedSurface(snap), DataError);
    snap.quotes.clear();
    CHECK_THROWS_AS(ImpliedSurface(snap), DataError);
}
