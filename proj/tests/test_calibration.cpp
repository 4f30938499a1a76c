#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <string>

#include "fxlv/calibration.hpp"
#include "fxlv/errors.hpp"
#include "fxlv/market_data.hpp"
#include "fxlv/synthetic.hpp"

using namespace fxlv;
using Catch::Matchers::WithinAbs;

TEST_CASE("a flat market round-trips through the pricer", "[calibration]") {
    SyntheticConfig scfg;
    scfg.days = 1;
    scfg.spot = 0.77;
    const auto days = make_history(scfg);

    CalibrationConfig cfg;
    cfg.grid_m = 200;
    const CalibrationReport rep = calibrate_check(days.front(), cfg);

    REQUIRE(rep.rows.size() == 50);
    CHECK(rep.date == days.front().date);
    CHECK(rep.failed_count == 0);
    for (const CalibrationRow& row : rep.rows) {
        CHECK_FALSE(row.failed);
        CHECK(row.market_vol == 0.10);
        // Flat surface: numerical round trip is far inside the flag line.
        CHECK(row.abs_error < 5e-4);
        CHECK_FALSE(row.flagged);
        CHECK(row.strike > 0.0);
    }
    CHECK(rep.max_abs_error < 5e-4);
    CHECK(rep.mean_abs_error <= rep.max_abs_error);

    // Rows come out tenor-major, five labels per tenor, puts first.
    for (int t = 0; t < 10; ++t) {
        CHECK(rep.rows[5 * t].label == SmileLabel::p10);
        CHECK(rep.rows[5 * t + 2].label == SmileLabel::atm);
        CHECK(rep.rows[5 * t + 4].label == SmileLabel::c10);
        for (int l = 1; l < 5; ++l) CHECK(rep.rows[5 * t + l].tenor == rep.rows[5 * t].tenor);
        CHECK(rep.rows[5 * t].strike < rep.rows[5 * t + 4].strike);
    }
}

TEST_CASE("a wild quote surfaces in the report instead of sinking it", "[calibration]") {
    SyntheticConfig scfg;
    scfg.days = 1;
    const auto base = make_history(scfg);
    MarketSnapshot snap = base.front();
    snap.quotes[4].atm = 0.50;  // legal but absurd 6m pillar

    CalibrationConfig cfg;
    cfg.grid_m = 200;
    const CalibrationReport rep = calibrate_check(snap, cfg);
    REQUIRE(rep.rows.size() == 50);
    int suspicious = 0;
    for (const CalibrationRow& row : rep.rows) suspicious += (row.flagged || row.failed) ? 1 : 0;
    CHECK(suspicious > 0);

    // A structurally broken smile, by contrast, cannot be calibrated at all.
    MarketSnapshot broken = base.front();
    broken.quotes[4].fly25 = 0.5;
    broken.quotes[4].fly10 = 0.001;
    CHECK_THROWS_AS(calibrate_check(broken, cfg), DataError);
}

TEST_CASE("flag threshold marks coarse rows", "[calibration]") {
    SyntheticConfig scfg;
    scfg.days = 1;
    const auto days = make_history(scfg);
    CalibrationConfig cfg;
    cfg.grid_m = 200;
    cfg.flag_threshold = 1e-9;  // stricter than the solver can deliver
    const CalibrationReport rep = calibrate_check(days.front(), cfg);
    int flagged = 0;
    for (const CalibrationRow& row : rep.rows) flagged += row.flagged ? 1 : 0;
    CHECK(flagged > 0);
}

TEST_CASE("cell averages pool by tenor and label", "[calibration]") {
    CalibrationReport a, b;
    a.date = "2020-01-06";
    b.date = "2020-01-07";
    CalibrationRow r;
    r.tenor = 1.0;
    r.label = SmileLabel::atm;
    r.abs_error = 0.002;
    a.rows.push_back(r);
    r.abs_error = 0.004;
    b.rows.push_back(r);
    r.label = SmileLabel::c25;
    r.failed = true;
    b.rows.push_back(r);

    const auto cells = cell_averages({a, b});
    REQUIRE(cells.size() == 2);
    const CellAverage& atm_cell = cells[0].label == SmileLabel::atm ? cells[0] : cells[1];
    const CellAverage& c25_cell = cells[0].label == SmileLabel::atm ? cells[1] : cells[0];
    CHECK(atm_cell.count == 2);
    CHECK_THAT(atm_cell.mean_abs_error, WithinAbs(0.003, 1e-15));
    CHECK_THAT(atm_cell.max_abs_error, WithinAbs(0.004, 1e-15));
    CHECK(atm_cell.failed == 0);
    // Failed rows count as failures, not as error samples.
    CHECK(c25_cell.count == 0);
    CHECK(c25_cell.failed == 1);
}
