#pragma once

#include <vector>

namespace fxlv {

// Tridiagonal system solver (Thomas algorithm), O(n) time and memory.
// The system is
//   diag[0]  x0 + upper[0] x1                       = rhs[0]
//   lower[i-1] x(i-1) + diag[i] xi + upper[i] x(i+1) = rhs[i]
//   lower[n-2] x(n-2) + diag[n-1] x(n-1)            = rhs[n-1]
// so lower and upper have n-1 entries. Throws DomainError on size mismatch and
// NumericalError if a forward-elimination pivot falls below 1e-14 relative to
// the largest input coefficient.
std::vector<double> tridiag_solve(const std::vector<double>& lower,
                                  const std::vector<double>& diag,
                                  const std::vector<double>& upper,
                                  const std::vector<double>& rhs);

// In-place variant for hot loops: overwrites rhs with the solution and uses
// scratch (resized to n) for the modified upper diagonal. No allocation when
// scratch capacity suffices.
void tridiag_solve_inplace(const double* lower, const double* diag,
                           const double* upper, double* rhs, std::size_t n,
                           std::vector<double>& scratch);

}  // namespace fxlv
