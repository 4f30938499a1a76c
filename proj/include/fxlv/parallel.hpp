#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fxlv {

// Execution policy for the data-parallel kernels (local-vol grid columns,
// backtest start dates, Monte Carlo paths, calibration rows). Every kernel has
// a serial reference path; the parallel path must produce identical results,
// which the kernels guarantee by writing to disjoint, pre-sized slots and
// keeping all reductions in a serial pass afterwards.
enum class Exec { serial, parallel };

// Runs body(i) for i in [0, n). With Exec::parallel and OpenMP available the
// iterations are distributed across threads; body must not throw.
template <class Body>
void parallel_for(Exec exec, std::ptrdiff_t n, const Body& body) {
    if (exec == Exec::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
    } else {
        for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
    }
}

}  // namespace fxlv
