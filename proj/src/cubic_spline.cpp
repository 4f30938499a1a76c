#include "fxlv/cubic_spline.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "fxlv/errors.hpp"
#include "fxlv/tridiag.hpp"

namespace fxlv {

CubicSpline::CubicSpline(std::vector<double> xs, std::vector<double> ys)
    : x_(std::move(xs)), y_(std::move(ys)) {
    const std::size_t n = x_.size();
    if (n < 2) throw DomainError("CubicSpline: need at least 2 knots, got " + std::to_string(n));
    if (y_.size() != n) throw DomainError("CubicSpline: knot/value count mismatch");
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (!(x_[i] < x_[i + 1]))
            throw DomainError("CubicSpline: knots not strictly increasing at index " +
                              std::to_string(i));

    m_.assign(n, 0.0);
    if (n == 2) return;

    // Moment system for the n-2 interior second derivatives; the natural
    // boundary pins m_0 = m_{n-1} = 0.
    const std::size_t k = n - 2;
    std::vector<double> lower(k - 1), diag(k), upper(k - 1), rhs(k);
    for (std::size_t i = 0; i < k; ++i) {
        const double h0 = x_[i + 1] - x_[i];
        const double h1 = x_[i + 2] - x_[i + 1];
        diag[i] = (h0 + h1) / 3.0;
        if (i > 0) lower[i - 1] = h0 / 6.0;
        if (i + 1 < k) upper[i] = h1 / 6.0;
        rhs[i] = (y_[i + 2] - y_[i + 1]) / h1 - (y_[i + 1] - y_[i]) / h0;
    }
    std::vector<double> sol = tridiag_solve(lower, diag, upper, rhs);
    for (std::size_t i = 0; i < k; ++i) m_[i + 1] = sol[i];
}

std::size_t CubicSpline::interval(double x) const {
    // Index i with x in [x_i, x_{i+1}); clamped to the end pieces.
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::ptrdiff_t d = it - x_.begin();
    if (d <= 1) return 0;
    if (static_cast<std::size_t>(d) >= x_.size()) return x_.size() - 2;
    return static_cast<std::size_t>(d - 1);
}

double CubicSpline::value(double x) const {
    if (x < x_.front()) return y_.front() + deriv(x_.front()) * (x - x_.front());
    if (x > x_.back()) return y_.back() + deriv(x_.back()) * (x - x_.back());
    const std::size_t i = interval(x);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h;
    const double b = (x - x_[i]) / h;
    return a * y_[i] + b * y_[i + 1] +
           ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::deriv(double x) const {
    std::size_t i;
    if (x <= x_.front())
        i = 0, x = x_.front();
    else if (x >= x_.back())
        i = x_.size() - 2, x = x_.back();
    else
        i = interval(x);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h;
    const double b = (x - x_[i]) / h;
    return (y_[i + 1] - y_[i]) / h +
           ((3.0 * b * b - 1.0) * m_[i + 1] - (3.0 * a * a - 1.0) * m_[i]) * h / 6.0;
}

double CubicSpline::second_deriv(double x) const {
    if (x < x_.front() || x > x_.back()) return 0.0;
    const std::size_t i = interval(x);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h;
    const double b = (x - x_[i]) / h;
    return a * m_[i] + b * m_[i + 1];
}

}  // namespace fxlv
