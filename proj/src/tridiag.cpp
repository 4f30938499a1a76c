#include "fxlv/tridiag.hpp"

#include <cmath>
#include <string>

#include "fxlv/errors.hpp"

namespace fxlv {

void tridiag_solve_inplace(const double* lower, const double* diag,
                           const double* upper, double* rhs, std::size_t n,
                           std::vector<double>& scratch) {
    if (n == 0) throw DomainError("tridiag_solve: empty system");
    scratch.resize(n);

    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::fabs(diag[i]));
    for (std::size_t i = 0; i + 1 < n; ++i) {
        scale = std::max(scale, std::fabs(lower[i]));
        scale = std::max(scale, std::fabs(upper[i]));
    }
    const double tiny = 1e-14 * std::max(scale, 1.0);

    // Forward elimination. scratch holds the normalized upper diagonal.
    double piv = diag[0];
    if (std::fabs(piv) < tiny) throw NumericalError("tridiag_solve: zero pivot at row 0");
    scratch[0] = (n > 1) ? upper[0] / piv : 0.0;
    rhs[0] /= piv;
    for (std::size_t i = 1; i < n; ++i) {
        piv = diag[i] - lower[i - 1] * scratch[i - 1];
        if (std::fabs(piv) < tiny)
            throw NumericalError("tridiag_solve: zero pivot at row " + std::to_string(i));
        if (i + 1 < n) scratch[i] = upper[i] / piv;
        rhs[i] = (rhs[i] - lower[i - 1] * rhs[i - 1]) / piv;
    }

    // Back substitution.
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= scratch[i] * rhs[i + 1];
}

std::vector<double> tridiag_solve(const std::vector<double>& lower,
                                  const std::vector<double>& diag,
                                  const std::vector<double>& upper,
                                  const std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    if (rhs.size() != n || (n > 0 && (lower.size() != n - 1 || upper.size() != n - 1)))
        throw DomainError("tridiag_solve: band sizes inconsistent with n=" + std::to_string(n));
    std::vector<double> x = rhs;
    std::vector<double> scratch;
    tridiag_solve_inplace(lower.data(), diag.data(), upper.data(), x.data(), n, scratch);
    return x;
}

}  // namespace fxlv
