#pragma once

#include <vector>

#include "fxlv/black_scholes.hpp"
#include "fxlv/cubic_spline.hpp"
#include "fxlv/implied_surface.hpp"
#include "fxlv/market_data.hpp"
#include "fxlv/mesh.hpp"

namespace fxlv {

struct PayoffSpec {
    OptionSide side = OptionSide::call;
    double strike = 0.0;

    double terminal(double s) const {
        return side == OptionSide::call ? (s > strike ? s - strike : 0.0)
                                        : (strike > s ? strike - s : 0.0);
    }
    // Linearity coefficients for the boundary rows: dV/dS at the lower and
    // upper price boundary (0 or +-1 for vanillas).
    double e_lower() const { return side == OptionSide::call ? 0.0 : -1.0; }
    double e_upper() const { return side == OptionSide::call ? 1.0 : 0.0; }
};

// The t = 0 slice of a backward Crank-Nicolson solve with its interpolating
// natural cubic spline. price()/delta() evaluate the spline and its slope and
// refuse points outside the mesh.
class CNSolution {
public:
    CNSolution(Mesh mesh, std::vector<double> values);

    double price(double s) const;
    double delta(double s) const;

    const Mesh& mesh() const { return mesh_; }
    const std::vector<double>& values() const { return values_; }

private:
    Mesh mesh_;
    std::vector<double> values_;
    CubicSpline interp_;
};

// Value-function slices at selected time indices (ascending), each with its
// own interpolating spline. Slice i holds the option value at mesh time
// times[indices[i]]; simulated hedging reads deltas from these.
struct CNSlices {
    Mesh mesh;
    std::vector<int> indices;
    std::vector<std::vector<double>> values;
    std::vector<CubicSpline> interp;

    double value(std::size_t slice, double s) const;
    double delta(std::size_t slice, double s) const;
};

// Backward induction per the two-level scheme
//   a V[j] - b V[j+1] - c V[j-1] (new level) = d V[j] + b V[j+1] + c V[j-1] (old level)
// with a = r/2 + 1/dt + s2/(2 dx^2), b = s2/(4 dx^2) + nu/(4 dx),
// c = s2/(4 dx^2) - nu/(4 dx), d = 1/dt - r/2 - s2/(2 dx^2),
// nu = r - q - s2/2, s2 the local variance at the respective level, and linear
// first/last rows V[0] - V[1] = e0 (s0 - s1), V[m] - V[m-1] = einf (sm - sm-1).
// Each step solves one tridiagonal system.
//
// The grid variant requires grid dimensions matching the mesh.
CNSolution cn_solve(const Mesh& mesh, const PayoffSpec& payoff, const LocalVolGrid& grid,
                    const ZeroCurve& dom, const ZeroCurve& frn);
CNSolution cn_solve(const Mesh& mesh, const PayoffSpec& payoff, double vol, double rd, double rf);
CNSolution cn_solve(const Mesh& mesh, const PayoffSpec& payoff, const VolTermStructure& vols,
                    const ZeroCurve& dom, const ZeroCurve& frn);

// Same solve, retaining the value function at the requested time indices.
CNSlices cn_solve_slices(const Mesh& mesh, const PayoffSpec& payoff, const LocalVolGrid& grid,
                         const ZeroCurve& dom, const ZeroCurve& frn, std::vector<int> indices);
CNSlices cn_solve_slices(const Mesh& mesh, const PayoffSpec& payoff, double vol, double rd,
                         double rf, std::vector<int> indices);

}  // namespace fxlv
