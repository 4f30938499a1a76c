#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "fxlv/black_scholes.hpp"
#include "fxlv/cn_solver.hpp"
#include "fxlv/errors.hpp"
#include "fxlv/implied_surface.hpp"
#include "fxlv/market_data.hpp"
#include "fxlv/mesh.hpp"

using namespace fxlv;
using Catch::Matchers::WithinAbs;

TEST_CASE("flat-vol solve matches the closed form", "[cn]") {
    const Mesh mesh = build_mesh(1.0, 1.0, 0.20);
    const PayoffSpec call{OptionSide::call, 1.0};
    const CNSolution sol = cn_solve(mesh, call, 0.20, 0.05, 0.0);

    for (double s : {0.9, 1.0, 1.1}) {
        const double ref = bs::call_price(s, 1.0, 1.0, 0.05, 0.0, 0.20);
        CHECK(std::fabs(sol.price(s) - ref) / ref < 1e-3);
        CHECK_THAT(sol.delta(s), WithinAbs(bs::call_delta(s, 1.0, 1.0, 0.05, 0.0, 0.20), 5e-3));
    }

    const PayoffSpec put{OptionSide::put, 1.0};
    const CNSolution psol = cn_solve(mesh, put, 0.20, 0.05, 0.02);
    for (double s : {0.9, 1.0, 1.1}) {
        const double ref = bs::put_price(s, 1.0, 1.0, 0.05, 0.02, 0.20);
        CHECK(std::fabs(psol.price(s) - ref) / ref < 1e-3);
        CHECK_THAT(psol.delta(s), WithinAbs(bs::put_delta(s, 1.0, 1.0, 0.05, 0.02, 0.20), 5e-3));
    }
}

TEST_CASE("refining the price axis lowers the error", "[cn]") {
    const PayoffSpec call{OptionSide::call, 1.0};
    auto max_err = [&](int m) {
        const Mesh mesh = build_mesh(1.0, 1.0, 0.20, 7.0, m);
        const CNSolution sol = cn_solve(mesh, call, 0.20, 0.05, 0.0);
        double worst = 0.0;
        for (double s : {0.9, 1.0, 1.1})
            worst = std::max(worst,
                             std::fabs(sol.price(s) - bs::call_price(s, 1.0, 1.0, 0.05, 0.0, 0.20)));
        return worst;
    };
    CHECK(max_err(800) < max_err(400));
}

TEST_CASE("constant grid and scalar vol take the same path", "[cn]") {
    const Mesh mesh = build_mesh(1.0, 0.5, 0.10);
    const PayoffSpec call{OptionSide::call, 1.05};
    const ZeroCurve dom({1.0}, {0.03});
    const ZeroCurve frn({1.0}, {0.01});
    const CNSolution a = cn_solve(mesh, call, LocalVolGrid::constant(mesh, 0.10), dom, frn);
    const CNSolution b = cn_solve(mesh, call, 0.10, 0.03, 0.01);
    CHECK(a.values() == b.values());
}

TEST_CASE("term-structure solve prices at the average vol", "[cn]") {
    const Mesh mesh = build_mesh(1.0, 1.0, 0.12);
    const PayoffSpec call{OptionSide::call, 1.0};
    const VolTermStructure vols({0.5, 1.0}, {0.10, 0.14});
    const ZeroCurve dom({0.5, 1.0}, {0.040, 0.048});
    const ZeroCurve frn({1.0}, {0.02});
    const CNSolution sol = cn_solve(mesh, call, vols, dom, frn);
    // Piecewise-constant coefficients only enter through their averages.
    const double ref = bs::call_price(1.0, 1.0, 1.0, dom.average(1.0), 0.02, vols.average(1.0));
    CHECK(std::fabs(sol.price(1.0) - ref) / ref < 1e-3);
}

TEST_CASE("call delta is monotone in spot", "[cn]") {
    const Mesh mesh = build_mesh(1.0, 1.0, 0.20);
    const CNSolution sol = cn_solve(mesh, PayoffSpec{OptionSide::call, 1.0}, 0.20, 0.0, 0.0);
    double prev = -1.0;
    for (double s = 0.6; s <= 1.6; s += 0.05) {
        const double d = sol.delta(s);
        CHECK(d >= prev - 1e-9);
        CHECK(d >= 0.0);
        CHECK(d <= 1.0 + 1e-9);
        prev = d;
    }
}

TEST_CASE("retained slices bracket the solve", "[cn]") {
    const Mesh mesh = build_mesh(1.0, 1.0, 0.20);
    const PayoffSpec call{OptionSide::call, 1.0};
    const CNSlices slices = cn_solve_slices(mesh, call, 0.20, 0.05, 0.0, {0, mesh.n / 2, mesh.n});
    REQUIRE(slices.indices.size() == 3);

    // Last slice is the terminal payoff, first is the full solve.
    for (int j = 0; j <= mesh.m; ++j)
        CHECK(slices.values[2][j] == call.terminal(mesh.prices[j]));
    const CNSolution sol = cn_solve(mesh, call, 0.20, 0.05, 0.0);
    CHECK(slices.values[0] == sol.values());

    // The middle slice prices the option with half the maturity left.
    const double mid = slices.value(1, 1.0);
    const double ref = bs::call_price(1.0, 1.0, 0.5, 0.05, 0.0, 0.20);
    CHECK(std::fabs(mid - ref) / ref < 1e-3);
    CHECK_THAT(slices.delta(1, 1.0), WithinAbs(bs::call_delta(1.0, 1.0, 0.5, 0.05, 0.0, 0.20), 5e-3));

    // Duplicate and unsorted index requests collapse cleanly.
    const CNSlices dup = cn_solve_slices(mesh, call, 0.20, 0.05, 0.0, {mesh.n, 0, 0});
    REQUIRE(dup.indices.size() == 2);
    CHECK(dup.indices[0] == 0);
    CHECK(dup.values[0] == sol.values());
}

TEST_CASE("solver input validation", "[cn]") {
    const Mesh mesh = build_mesh(1.0, 1.0, 0.20);
    const PayoffSpec call{OptionSide::call, 1.0};
    const CNSolution sol = cn_solve(mesh, call, 0.20, 0.0, 0.0);

    CHECK_THROWS_AS(sol.price(mesh.price_max() * 1.01), DomainError);
    CHECK_THROWS_AS(sol.delta(mesh.price_min() * 0.99), DomainError);

    const Mesh other = build_mesh(1.0, 1.0, 0.20, 7.0, 200);
    CHECK_THROWS_AS(
        cn_solve(mesh, call, LocalVolGrid::constant(other, 0.2), ZeroCurve({1}, {0.0}),
                 ZeroCurve({1}, {0.0})),
        DomainError);
    CHECK_THROWS_AS(cn_solve(mesh, PayoffSpec{OptionSide::call, -1.0}, 0.2, 0.0, 0.0),
                    DomainError);
    CHECK_THROWS_AS(cn_solve(mesh, call, -0.2, 0.0, 0.0), DomainError);
    CHECK_THROWS_AS(cn_solve_slices(mesh, call, 0.2, 0.0, 0.0, {}), DomainError);
    CHECK_THROWS_AS(cn_solve_slices(mesh, call, 0.2, 0.0, 0.0, {mesh.n + 1}), DomainError);
}
