#pragma once

#include <vector>

namespace fxlv {

// Rectangular log-price/time lattice for the finite-difference solver. The
// price axis spans [spot e^{-D}, spot e^{D}] with D = gamma * theta_bar *
// sqrt(maturity), so the boundaries sit gamma average-vol standard deviations
// away from the spot. Node m/2 is exactly the spot.
struct Mesh {
    double spot = 0.0;
    double maturity = 0.0;
    double theta_bar = 0.0;   // average ATM vol driving the width
    double gamma = 0.0;
    double half_width = 0.0;  // D
    int m = 0;                // price intervals (even); m+1 nodes
    int n = 0;                // time steps; n+1 slices
    double dx = 0.0;
    double dt = 0.0;
    std::vector<double> times;        // times[i] = maturity * i / n
    std::vector<double> log_offsets;  // dx * (j - m/2), zero at the center
    std::vector<double> prices;       // spot * exp(log_offsets[j])

    double price_min() const { return prices.front(); }
    double price_max() const { return prices.back(); }
    bool contains(double s) const { return s >= prices.front() && s <= prices.back(); }
};

// n is tied to the maturity as round(500 T + 500), roughly a thousand steps
// per year with a 500-step floor. m must be even so the spot lands on a node.
Mesh build_mesh(double spot, double maturity, double theta_bar, double gamma = 7.0, int m = 400);

}  // namespace fxlv
