#include "fxlv/cn_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "fxlv/errors.hpp"
#include "fxlv/tridiag.hpp"

namespace fxlv {

namespace {

void check_payoff(const PayoffSpec& payoff) {
    if (!(payoff.strike > 0.0)) throw DomainError("cn_solve: strike must be positive");
}

// Core backward induction, templated over the local-variance source
// sig2(i, j) so the three public vol variants share one loop. keep must be
// sorted ascending; slices land in out in the same order.
template <class Sig2At>
void cn_backward(const Mesh& mesh, const PayoffSpec& payoff, const Sig2At& sig2,
                 const std::vector<double>& r_row, const std::vector<double>& q_row,
                 const std::vector<int>& keep, std::vector<std::vector<double>>& out) {
    const int m = mesh.m;
    const int n = mesh.n;
    const double dx = mesh.dx;
    const double dt = mesh.dt;
    const double inv_dt = 1.0 / dt;
    const double inv_dx2 = 1.0 / (2.0 * dx * dx);   // s2 * inv_dx2 = s2/(2 dx^2)
    const double quarter_dx2 = 1.0 / (4.0 * dx * dx);
    const double quarter_dx = 1.0 / (4.0 * dx);

    std::vector<double> v(m + 1);
    for (int j = 0; j <= m; ++j) v[j] = payoff.terminal(mesh.prices[j]);

    // Variance rows for the two time levels of the current step.
    std::vector<double> s2_hi(m + 1), s2_lo(m + 1);
    for (int j = 0; j <= m; ++j) s2_hi[j] = sig2(n, j);

    std::vector<double> lower(m), diag(m + 1), upper(m), rhs(m + 1), scratch;

    auto maybe_keep = [&](int level) {
        for (std::size_t k = 0; k < keep.size(); ++k)
            if (keep[k] == level) out[k] = v;
    };
    out.assign(keep.size(), {});
    maybe_keep(n);

    const double ds_lower = mesh.prices[0] - mesh.prices[1];
    const double ds_upper = mesh.prices[m] - mesh.prices[m - 1];

    for (int i = n; i >= 1; --i) {
        const double r_hi = r_row[i], q_hi = q_row[i];
        const double r_lo = r_row[i - 1], q_lo = q_row[i - 1];
        for (int j = 0; j <= m; ++j) s2_lo[j] = sig2(i - 1, j);

        // Interior rows: explicit side from level i, implicit side at i-1.
        for (int j = 1; j < m; ++j) {
            const double nu_hi = r_hi - q_hi - 0.5 * s2_hi[j];
            const double b_hi = s2_hi[j] * quarter_dx2 + nu_hi * quarter_dx;
            const double c_hi = s2_hi[j] * quarter_dx2 - nu_hi * quarter_dx;
            const double d_hi = inv_dt - 0.5 * r_hi - s2_hi[j] * inv_dx2;
            rhs[j] = d_hi * v[j] + b_hi * v[j + 1] + c_hi * v[j - 1];

            const double nu_lo = r_lo - q_lo - 0.5 * s2_lo[j];
            const double b_lo = s2_lo[j] * quarter_dx2 + nu_lo * quarter_dx;
            const double c_lo = s2_lo[j] * quarter_dx2 - nu_lo * quarter_dx;
            diag[j] = 0.5 * r_lo + inv_dt + s2_lo[j] * inv_dx2;
            upper[j] = -b_lo;
            lower[j - 1] = -c_lo;
        }

        // Boundary rows pin the slope in price at both ends.
        diag[0] = 1.0;
        upper[0] = -1.0;
        rhs[0] = payoff.e_lower() * ds_lower;
        diag[m] = 1.0;
        lower[m - 1] = -1.0;
        rhs[m] = payoff.e_upper() * ds_upper;

        try {
            tridiag_solve_inplace(lower.data(), diag.data(), upper.data(), rhs.data(),
                                  static_cast<std::size_t>(m + 1), scratch);
        } catch (const NumericalError& e) {
            throw NumericalError("cn_solve: step " + std::to_string(i) + ": " + e.what());
        }
        v.swap(rhs);
        s2_hi.swap(s2_lo);
        maybe_keep(i - 1);
    }
}

std::vector<int> validate_indices(const Mesh& mesh, std::vector<int> idx) {
    if (idx.empty()) throw DomainError("cn_solve_slices: no indices requested");
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    if (idx.front() < 0 || idx.back() > mesh.n)
        throw DomainError("cn_solve_slices: time index outside [0, n]");
    return idx;
}

void rate_rows(const Mesh& mesh, const ZeroCurve& dom, const ZeroCurve& frn,
               std::vector<double>& r_row, std::vector<double>& q_row) {
    r_row.resize(mesh.n + 1);
    q_row.resize(mesh.n + 1);
    for (int i = 0; i <= mesh.n; ++i) {
        r_row[i] = dom.instantaneous(mesh.times[i]);
        q_row[i] = frn.instantaneous(mesh.times[i]);
    }
}

CNSlices finish_slices(const Mesh& mesh, std::vector<int> idx,
                       std::vector<std::vector<double>> vals) {
    CNSlices s;
    s.mesh = mesh;
    s.indices = std::move(idx);
    s.interp.reserve(vals.size());
    for (const auto& v : vals) s.interp.emplace_back(mesh.prices, v);
    s.values = std::move(vals);
    return s;
}

void check_grid(const Mesh& mesh, const LocalVolGrid& grid) {
    if (grid.times.size() != mesh.times.size() || grid.prices.size() != mesh.prices.size())
        throw DomainError("cn_solve: local-vol grid dimensions do not match the mesh");
}

}  // namespace

CNSolution::CNSolution(Mesh mesh, std::vector<double> values)
    : mesh_(std::move(mesh)), values_(std::move(values)), interp_(mesh_.prices, values_) {}

double CNSolution::price(double s) const {
    if (!mesh_.contains(s))
        throw DomainError("cn price: spot " + std::to_string(s) + " outside mesh");
    return interp_.value(s);
}

double CNSolution::delta(double s) const {
    if (!mesh_.contains(s))
        throw DomainError("cn delta: spot " + std::to_string(s) + " outside mesh");
    return interp_.deriv(s);
}

double CNSlices::value(std::size_t slice, double s) const {
    if (!mesh.contains(s))
        throw DomainError("cn slice value: spot " + std::to_string(s) + " outside mesh");
    return interp[slice].value(s);
}

double CNSlices::delta(std::size_t slice, double s) const {
    if (!mesh.contains(s))
        throw DomainError("cn slice delta: spot " + std::to_string(s) + " outside mesh");
    return interp[slice].deriv(s);
}

CNSlices cn_solve_slices(const Mesh& mesh, const PayoffSpec& payoff, const LocalVolGrid& grid,
                         const ZeroCurve& dom, const ZeroCurve& frn, std::vector<int> indices) {
    check_payoff(payoff);
    check_grid(mesh, grid);
    std::vector<int> idx = validate_indices(mesh, std::move(indices));
    std::vector<double> r_row, q_row;
    rate_rows(mesh, dom, frn, r_row, q_row);
    const std::size_t ns = grid.prices.size();
    std::vector<std::vector<double>> vals;
    cn_backward(
        mesh, payoff,
        [&](int i, int j) {
            const double s = grid.sigma[static_cast<std::size_t>(i) * ns + j];
            return s * s;
        },
        r_row, q_row, idx, vals);
    return finish_slices(mesh, std::move(idx), std::move(vals));
}

CNSlices cn_solve_slices(const Mesh& mesh, const PayoffSpec& payoff, double vol, double rd,
                         double rf, std::vector<int> indices) {
    check_payoff(payoff);
    if (!(vol >= 0.0)) throw DomainError("cn_solve: vol must be nonnegative");
    std::vector<int> idx = validate_indices(mesh, std::move(indices));
    const std::vector<double> r_row(mesh.n + 1, rd), q_row(mesh.n + 1, rf);
    const double s2 = vol * vol;
    std::vector<std::vector<double>> vals;
    cn_backward(
        mesh, payoff, [&](int, int) { return s2; }, r_row, q_row, idx, vals);
    return finish_slices(mesh, std::move(idx), std::move(vals));
}

CNSolution cn_solve(const Mesh& mesh, const PayoffSpec& payoff, const LocalVolGrid& grid,
                    const ZeroCurve& dom, const ZeroCurve& frn) {
    CNSlices s = cn_solve_slices(mesh, payoff, grid, dom, frn, {0});
    return CNSolution(std::move(s.mesh), std::move(s.values.front()));
}

CNSolution cn_solve(const Mesh& mesh, const PayoffSpec& payoff, double vol, double rd, double rf) {
    CNSlices s = cn_solve_slices(mesh, payoff, vol, rd, rf, {0});
    return CNSolution(std::move(s.mesh), std::move(s.values.front()));
}

CNSolution cn_solve(const Mesh& mesh, const PayoffSpec& payoff, const VolTermStructure& vols,
                    const ZeroCurve& dom, const ZeroCurve& frn) {
    check_payoff(payoff);
    std::vector<double> r_row, q_row;
    rate_rows(mesh, dom, frn, r_row, q_row);
    std::vector<double> s2_row(mesh.n + 1);
    for (int i = 0; i <= mesh.n; ++i) {
        const double s = vols.instantaneous(mesh.times[i]);
        s2_row[i] = s * s;
    }
    std::vector<std::vector<double>> vals;
    const std::vector<int> idx{0};
    cn_backward(
        mesh, payoff, [&](int i, int) { return s2_row[i]; }, r_row, q_row, idx, vals);
    return CNSolution(mesh, std::move(vals.front()));
}

}  // namespace fxlv
