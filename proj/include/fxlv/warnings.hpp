#pragma once

#include <array>
#include <atomic>
#include <cstdint>

namespace fxlv::warnings {

// Thread-safe counters for non-fatal numerical events. Library code increments,
// callers decide whether to report. Counters accumulate; reset() before a run
// gives per-run counts.

enum class Kind {
    negative_forward_variance,  // vol term structure clamped a negative forward variance
    negative_local_variance,    // Dupire numerator < 0, local vol set to 0
    capped_local_vol,           // Dupire denominator ~ 0, local vol set to the cap
    sim_edge_clamp,             // local-vol path simulation clamped a lookup to the grid edge
    kind_count
};

namespace detail {
inline std::array<std::atomic<std::uint64_t>, static_cast<int>(Kind::kind_count)>& counters() {
    static std::array<std::atomic<std::uint64_t>, static_cast<int>(Kind::kind_count)> c{};
    return c;
}
}  // namespace detail

inline void bump(Kind k) {
    detail::counters()[static_cast<int>(k)].fetch_add(1, std::memory_order_relaxed);
}

inline std::uint64_t count(Kind k) {
    return detail::counters()[static_cast<int>(k)].load(std::memory_order_relaxed);
}

inline void reset() {
    for (auto& c : detail::counters()) c.store(0, std::memory_order_relaxed);
}

}  // namespace fxlv::warnings
