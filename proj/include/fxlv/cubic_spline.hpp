#pragma once

#include <vector>

namespace fxlv {

// Natural cubic spline through (x_i, y_i) with zero second derivative at both
// end knots. Fitting solves the tridiagonal moment system in O(n).
//
// Outside the knot range evaluation continues the end piece linearly:
//   value(x) = y(x_end) + y'(x_end) * (x - x_end)
// so deriv() returns the end slope and second_deriv() returns 0 out there.
// This extension rule is what every consumer of the class relies on (smile
// sections queried beyond the quoted strikes, maturity sections queried below
// the first tenor), so it lives here rather than at call sites.
class CubicSpline {
public:
    CubicSpline() = default;

    // Knots must be strictly increasing, n >= 2. With n == 2 the spline is the
    // straight line through the two points.
    CubicSpline(std::vector<double> xs, std::vector<double> ys);

    double value(double x) const;
    double deriv(double x) const;
    double second_deriv(double x) const;

    std::size_t size() const { return x_.size(); }
    double x_front() const { return x_.front(); }
    double x_back() const { return x_.back(); }

private:
    std::size_t interval(double x) const;

    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> m_;  // second derivatives at the knots, m_front = m_back = 0
};

}  // namespace fxlv
