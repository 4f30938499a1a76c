#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fxlv/implied_surface.hpp"
#include "fxlv/market_data.hpp"
#include "fxlv/parallel.hpp"

namespace fxlv {

struct CalibrationConfig {
    double gamma = 7.0;
    int grid_m = 400;
    double flag_threshold = 0.005;  // 0.5 vol points, the calibration acceptance bar
    Exec exec = Exec::serial;
    DupireParams dupire{};
};

// One quote's round trip: market vol in, implied vol of the CN price on the
// calibrated local-vol surface out.
struct CalibrationRow {
    double tenor = 0.0;
    SmileLabel label = SmileLabel::atm;
    double strike = 0.0;
    double market_vol = 0.0;
    double model_vol = 0.0;
    double abs_error = 0.0;
    bool flagged = false;  // abs_error above the threshold
    bool failed = false;
    std::string reason;
};

struct CalibrationReport {
    std::string date;
    std::vector<CalibrationRow> rows;  // tenor-major, p10..c10 within a tenor
    double max_abs_error = 0.0;
    double mean_abs_error = 0.0;  // over the successful rows
    std::size_t failed_count = 0;
};

// Round-trips every quote of a snapshot through the full pipeline: implied
// surface -> local-vol grid -> CN call price -> implied vol, with the same
// period-average zero rates on both legs. One grid per tenor serves its five
// strikes. Tenors are independent, so the parallel path distributes them and
// keeps the per-grid column loop serial.
CalibrationReport calibrate_check(const MarketSnapshot& snap, const CalibrationConfig& cfg = {});

// Per-(tenor, label) averages over a run of daily reports; failed rows are
// excluded from the statistics but counted.
struct CellAverage {
    double tenor = 0.0;
    SmileLabel label = SmileLabel::atm;
    double mean_abs_error = 0.0;
    double max_abs_error = 0.0;
    std::size_t count = 0;
    std::size_t failed = 0;
};
std::vector<CellAverage> cell_averages(const std::vector<CalibrationReport>& reports);

}  // namespace fxlv
