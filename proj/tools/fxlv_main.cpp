// fxlv: calibrate an FX local-volatility surface from quote histories, price
// vanillas on it, dump the calibrated grid, and run delta-hedging backtests
// and Monte Carlo hedging experiments. Every command reads/writes the CSV
// formats described in --help; numeric output carries 10 significant digits
// and is deterministic for fixed inputs and seed.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fxlv/backtest.hpp"
#include "fxlv/black_scholes.hpp"
#include "fxlv/calibration.hpp"
#include "fxlv/cn_solver.hpp"
#include "fxlv/errors.hpp"
#include "fxlv/hedging.hpp"
#include "fxlv/implied_surface.hpp"
#include "fxlv/io_util.hpp"
#include "fxlv/market_data.hpp"
#include "fxlv/mesh.hpp"
#include "fxlv/synthetic.hpp"
#include "fxlv/warnings.hpp"

namespace {

using namespace fxlv;

struct Opts {
    std::string input;
    std::string output;  // primary CSV; empty = stdout
    std::string scheme = "bs";
    std::string label = "atm";
    std::string tenor;
    double gamma = 7.0;
    int grid_m = 400;
    double bump = 0.001;
    std::uint64_t seed = 0;
    int paths = 1000;
    int rebalance = 250;
    double vol = 0.1;
    double rate = 0.0;
    double div = 0.0;
    double spot = 1.0;
    double strike = 0.0;  // 0 = at the money
    double drift = 0.0;
    int days = 300;
    std::string emit_history;
    bool parallel = false;

    Exec exec() const { return parallel ? Exec::parallel : Exec::serial; }
};

// Primary and summary tables either share stdout (blank line between) or land
// in two files, the summary's name derived by tagging the primary's.
class CsvSink {
public:
    explicit CsvSink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw ConfigError("cannot open output file '" + path + "'");
        }
    }
    std::ostream& out() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

std::string tagged(const std::string& path, const std::string& tag) {
    if (path.empty()) return path;
    const auto dot = path.find_last_of('.');
    const auto slash = path.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + tag;
    return path.substr(0, dot) + tag + path.substr(dot);
}

void separate(CsvSink& primary, CsvSink& secondary) {
    if (&primary.out() == &secondary.out()) secondary.out() << '\n';
}

// Shared single-day pipeline: surface, tenor mesh and calibrated grid.
struct DayGrids {
    ImpliedSurface surf;
    Mesh mesh;
    LocalVolGrid grid;

    DayGrids(const MarketSnapshot& snap, double tenor, const Opts& o)
        : surf(snap),
          mesh(build_mesh(snap.spot, tenor, surf.mean_atm_vol(), o.gamma, o.grid_m)),
          grid(build_localvol_grid(surf, mesh, {}, o.exec())) {}
};

void run_calibrate(const Opts& o) {
    const auto days = load_history(o.input);
    CalibrationConfig cfg;
    cfg.gamma = o.gamma;
    cfg.grid_m = o.grid_m;
    cfg.exec = o.exec();

    std::vector<CalibrationReport> reports;
    reports.reserve(days.size());
    for (const MarketSnapshot& snap : days) {
        try {
            reports.push_back(calibrate_check(snap, cfg));
        } catch (const std::exception& e) {
            // One uncalibratable day should not sink a long history.
            std::cerr << "fxlv: " << snap.date << " calibration failed: " << e.what() << '\n';
        }
    }
    if (reports.empty()) throw DataError("calibration failed for every snapshot");

    CsvSink rows(o.output);
    rows.out() << "date,tenor,label,strike,market_vol,model_vol,abs_error,status\n";
    for (const CalibrationReport& rep : reports)
        for (const CalibrationRow& r : rep.rows) {
            const char* status = r.failed ? "failed" : (r.flagged ? "flagged" : "ok");
            rows.out() << rep.date << ',' << fmt_double(r.tenor) << ',' << label_name(r.label)
                       << ',' << fmt_double(r.strike) << ',' << fmt_double(r.market_vol) << ','
                       << fmt_double(r.model_vol) << ',' << fmt_double(r.abs_error) << ','
                       << status << '\n';
            if (r.failed)
                std::cerr << "fxlv: " << rep.date << ' ' << fmt_double(r.tenor) << ' '
                          << label_name(r.label) << " failed: " << r.reason << '\n';
        }

    CsvSink cells(tagged(o.output, "_cells"));
    separate(rows, cells);
    cells.out() << "tenor,label,mean_abs_error,max_abs_error,count\n";
    for (const CellAverage& c : cell_averages(reports))
        cells.out() << fmt_double(c.tenor) << ',' << label_name(c.label) << ','
                    << fmt_double(c.mean_abs_error) << ',' << fmt_double(c.max_abs_error) << ','
                    << c.count << '\n';
}

void run_price(const Opts& o) {
    const auto days = load_history(o.input);
    const double tenor = parse_tenor_token(o.tenor);
    const SmileLabel label = label_from_string(o.label);

    CsvSink rows(o.output);
    rows.out() << "date,tenor,label,strike,price,delta\n";
    for (const MarketSnapshot& snap : days) {
        const auto pts = smile_points(snap, snap.quote_at(tenor));
        const double strike = pts[static_cast<int>(label)].strike;
        const DayGrids day(snap, tenor, o);
        const CNSolution sol = cn_solve(day.mesh, PayoffSpec{OptionSide::call, strike}, day.grid,
                                        day.surf.dom_curve(), day.surf.for_curve());
        rows.out() << snap.date << ',' << fmt_double(tenor) << ',' << label_name(label) << ','
                   << fmt_double(strike) << ',' << fmt_double(sol.price(snap.spot)) << ','
                   << fmt_double(sol.delta(snap.spot)) << '\n';
    }
}

void run_localvol(const Opts& o) {
    const auto days = load_history(o.input);
    const double tenor = parse_tenor_token(o.tenor);
    const DayGrids day(days.front(), tenor, o);

    CsvSink rows(o.output);
    rows.out() << "t,s,sigma\n";
    for (std::size_t i = 0; i < day.grid.times.size(); ++i)
        for (std::size_t j = 0; j < day.grid.prices.size(); ++j)
            rows.out() << fmt_double(day.grid.times[i]) << ',' << fmt_double(day.grid.prices[j])
                       << ',' << fmt_double(day.grid.at(i, j)) << '\n';
}

void run_backtest(const Opts& o) {
    const auto days = load_history(o.input);
    BacktestConfig cfg;
    cfg.tenor_years = parse_tenor_token(o.tenor);
    cfg.label = label_from_string(o.label);
    cfg.scheme = scheme_from_string(o.scheme);
    cfg.gamma = o.gamma;
    cfg.grid_m = o.grid_m;
    cfg.bump = o.bump;
    cfg.exec = o.exec();

    const BacktestResult res = run_backtest(days, cfg);
    for (const FailedStart& f : res.failures)
        std::cerr << "fxlv: skipped start " << f.start_date << ": " << f.reason << '\n';
    if (!res.failures.empty())
        std::cerr << "fxlv: " << res.failures.size() << " start date(s) skipped\n";

    CsvSink rows(o.output);
    rows.out() << "start_date,scheme,label,tenor,strike,premium,error\n";
    for (const StartResult& r : res.results)
        rows.out() << r.start_date << ',' << scheme_name(cfg.scheme) << ','
                   << label_name(cfg.label) << ',' << fmt_double(cfg.tenor_years) << ','
                   << fmt_double(r.strike) << ',' << fmt_double(r.premium) << ','
                   << fmt_double(r.ledger.error) << '\n';

    CsvSink summary(tagged(o.output, "_summary"));
    separate(rows, summary);
    summary.out() << "scheme,label,tenor,mean,std\n";
    summary.out() << scheme_name(cfg.scheme) << ',' << label_name(cfg.label) << ','
                  << fmt_double(cfg.tenor_years) << ',' << fmt_double(res.summary.mean) << ','
                  << fmt_double(res.summary.stddev) << '\n';
}

void run_simulate(const Opts& o) {
    if (!o.emit_history.empty()) {
        SyntheticConfig cfg;
        cfg.spot = o.spot;
        cfg.atm_vol = o.vol;
        cfg.realized_vol = o.vol;
        cfg.dom_rate = o.rate;
        cfg.for_rate = o.div;
        cfg.drift = o.drift;
        cfg.days = o.days;
        cfg.seed = o.seed;
        const auto days = make_history(cfg);
        std::ofstream out(o.emit_history);
        if (!out) throw ConfigError("cannot open output file '" + o.emit_history + "'");
        write_history(out, days);
        return;
    }

    SimHedgeConfig cfg;
    cfg.scheme = o.scheme == "lv_tc" ? SimHedgeConfig::Scheme::lv_tc : SimHedgeConfig::Scheme::bs;
    if (o.scheme != "bs" && o.scheme != "lv_tc")
        throw ConfigError("simulate supports schemes bs and lv_tc");
    cfg.spot = o.spot;
    cfg.strike = o.strike > 0.0 ? o.strike : o.spot;
    cfg.vol = o.vol;
    cfg.rd = o.rate;
    cfg.rf = o.div;
    cfg.maturity = o.tenor.empty() ? 1.0 : parse_tenor_token(o.tenor);
    cfg.rebalances = o.rebalance;
    cfg.paths = o.paths;
    cfg.seed = o.seed;
    cfg.gamma = o.gamma;
    cfg.grid_m = o.grid_m;

    const SimHedgeResult res = simulate_hedge(cfg, o.exec());
    if (res.failures != 0)
        std::cerr << "fxlv: " << res.failures << " path(s) left the mesh and were dropped\n";

    CsvSink rows(o.output);
    rows.out() << "path,error\n";
    for (std::size_t i = 0; i < res.errors.size(); ++i)
        rows.out() << i << ',' << fmt_double(res.errors[i]) << '\n';

    CsvSink summary(tagged(o.output, "_summary"));
    separate(rows, summary);
    summary.out() << "scheme,mean,std\n";
    summary.out() << (cfg.scheme == SimHedgeConfig::Scheme::bs ? "bs" : "lv_tc") << ','
                  << fmt_double(res.mean) << ',' << fmt_double(res.stddev) << '\n';
}

void report_warnings() {
    struct Row {
        warnings::Kind kind;
        const char* text;
    };
    static const Row rows[] = {
        {warnings::Kind::negative_forward_variance, "negative forward variance clamped to zero"},
        {warnings::Kind::negative_local_variance, "negative local variance clamped to zero"},
        {warnings::Kind::capped_local_vol, "local volatility capped"},
        {warnings::Kind::sim_edge_clamp, "simulated spot clamped at the grid edge"},
    };
    for (const Row& r : rows)
        if (auto n = warnings::count(r.kind); n != 0)
            std::cerr << "fxlv: warning: " << r.text << " (" << n << "x)\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "FX local-volatility toolkit: smile calibration, Crank-Nicolson pricing "
        "and delta-hedging backtests"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value file supplying defaults; flags override it");

    Opts o;
    auto add_input = [&](CLI::App* c) {
        c->add_option("--input", o.input, "history CSV (see README for the format)")
            ->required();
    };
    auto add_output = [&](CLI::App* c) {
        c->add_option("--output", o.output,
                      "primary CSV path (default stdout); summary tables land next to it");
    };
    auto add_mesh = [&](CLI::App* c) {
        c->add_option("--gamma", o.gamma, "mesh half-width in ATM standard deviations")
            ->capture_default_str();
        c->add_option("--grid-m", o.grid_m, "price intervals in the mesh (even)")
            ->capture_default_str();
    };
    auto add_parallel = [&](CLI::App* c) {
        c->add_flag("--parallel", o.parallel, "spread independent work across OpenMP threads");
    };
    auto add_tenor = [&](CLI::App* c, bool required) {
        auto* opt = c->add_option("--tenor", o.tenor, "tenor token: 1w, 3m, 2y or a year fraction");
        if (required) opt->required();
    };

    CLI::App* cal = app.add_subcommand(
        "calibrate", "round-trip every market quote through the calibrated surface");
    add_input(cal);
    add_output(cal);
    add_mesh(cal);
    add_parallel(cal);

    CLI::App* price = app.add_subcommand(
        "price", "CN-price one smile label's call on each day's calibrated surface");
    add_input(price);
    add_output(price);
    add_tenor(price, true);
    price->add_option("--label", o.label, "smile label: p10, p25, atm, c25, c10")
        ->capture_default_str();
    add_mesh(price);

    CLI::App* lv = app.add_subcommand(
        "localvol", "dump the first day's local-volatility grid for one tenor");
    add_input(lv);
    add_output(lv);
    add_tenor(lv, true);
    add_mesh(lv);

    CLI::App* bt = app.add_subcommand(
        "backtest", "delta-hedge rolling real-history options and summarize the errors");
    add_input(bt);
    add_output(bt);
    add_tenor(bt, true);
    bt->add_option("--scheme", o.scheme, "delta scheme: bs, lv_tc or lv_sticky")
        ->capture_default_str();
    bt->add_option("--label", o.label, "smile label picking the hedged strike")
        ->capture_default_str();
    bt->add_option("--bump", o.bump, "relative spot bump for the sticky scheme")
        ->capture_default_str();
    add_mesh(bt);
    add_parallel(bt);

    CLI::App* sim = app.add_subcommand(
        "simulate", "Monte Carlo hedging errors on simulated paths, or emit a synthetic history");
    add_output(sim);
    add_tenor(sim, false);
    sim->add_option("--scheme", o.scheme, "delta scheme: bs or lv_tc")->capture_default_str();
    sim->add_option("--paths", o.paths, "number of simulated paths")->capture_default_str();
    sim->add_option("--rebalance", o.rebalance, "rebalances per option life")
        ->capture_default_str();
    sim->add_option("--vol", o.vol, "flat volatility (market and realized)")
        ->capture_default_str();
    sim->add_option("--rate", o.rate, "domestic zero rate")->capture_default_str();
    sim->add_option("--div", o.div, "foreign zero rate (carry)")->capture_default_str();
    sim->add_option("--seed", o.seed, "random seed")->capture_default_str();
    sim->add_option("--spot", o.spot, "initial spot")->capture_default_str();
    sim->add_option("--strike", o.strike, "strike (default: at the money)");
    sim->add_option("--drift", o.drift, "real-world drift for --emit-history")
        ->capture_default_str();
    sim->add_option("--days", o.days, "snapshot count for --emit-history")->capture_default_str();
    sim->add_option("--emit-history", o.emit_history,
                    "write a flat-smile synthetic history CSV here instead of hedging");
    add_mesh(sim);
    add_parallel(sim);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (cal->parsed()) run_calibrate(o);
        else if (price->parsed()) run_price(o);
        else if (lv->parsed()) run_localvol(o);
        else if (bt->parsed()) run_backtest(o);
        else if (sim->parsed()) run_simulate(o);
        report_warnings();
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "fxlv: " << e.what() << '\n';
        return 1;
    }
}
