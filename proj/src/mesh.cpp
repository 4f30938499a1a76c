#include "fxlv/mesh.hpp"

#include <cmath>
#include <string>

#include "fxlv/errors.hpp"

namespace fxlv {

Mesh build_mesh(double spot, double maturity, double theta_bar, double gamma, int m) {
    if (!(spot > 0.0)) throw DomainError("build_mesh: spot must be positive");
    if (!(maturity > 0.0)) throw DomainError("build_mesh: maturity must be positive");
    if (!(theta_bar > 0.0)) throw DomainError("build_mesh: theta_bar must be positive");
    if (!(gamma > 0.0)) throw DomainError("build_mesh: gamma must be positive");
    if (m < 4 || m % 2 != 0)
        throw DomainError("build_mesh: price intervals must be even and >= 4, got " +
                          std::to_string(m));

    Mesh mesh;
    mesh.spot = spot;
    mesh.maturity = maturity;
    mesh.theta_bar = theta_bar;
    mesh.gamma = gamma;
    mesh.half_width = gamma * theta_bar * std::sqrt(maturity);
    mesh.m = m;
    mesh.n = static_cast<int>(std::lround(500.0 * maturity + 500.0));
    mesh.dx = 2.0 * mesh.half_width / m;
    mesh.dt = maturity / mesh.n;

    mesh.times.resize(mesh.n + 1);
    for (int i = 0; i <= mesh.n; ++i) mesh.times[i] = maturity * i / mesh.n;

    mesh.log_offsets.resize(m + 1);
    mesh.prices.resize(m + 1);
    for (int j = 0; j <= m; ++j) {
        mesh.log_offsets[j] = mesh.dx * (j - m / 2);
        mesh.prices[j] = spot * std::exp(mesh.log_offsets[j]);
    }
    return mesh;
}

}  // namespace fxlv
