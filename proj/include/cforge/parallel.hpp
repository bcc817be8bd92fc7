#pragma once

#include <atomic>
#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cforge {

// Verification kernels run either on one thread (reference path) or fanned
// out with OpenMP. Both paths return identical results; tests assert that.
enum class ExecMode { serial, parallel };

// Thread budget: min(OpenMP max threads, COCYCLE_FORGE_THREADS if set).
// Returns 1 when OpenMP is unavailable.
std::size_t max_threads();

// Smallest index i in [0, n) with violation(i) == true, or n when there is
// none. The predicate must be pure. The parallel path still returns the
// smallest violating index (atomic running minimum + work skipping), so the
// two modes are interchangeable.
template <typename Pred>
std::size_t first_violation(std::size_t n, ExecMode mode, Pred&& violation) {
#ifdef _OPENMP
    if (mode == ExecMode::parallel && n > 1) {
        std::atomic<std::size_t> best{n};
        const int threads = static_cast<int>(max_threads());
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            const std::size_t idx = static_cast<std::size_t>(i);
            if (idx >= best.load(std::memory_order_relaxed)) {
                continue;  // a smaller violation is already known
            }
            if (violation(idx)) {
                std::size_t cur = best.load(std::memory_order_relaxed);
                while (idx < cur &&
                       !best.compare_exchange_weak(cur, idx, std::memory_order_relaxed)) {
                }
            }
        }
        return best.load();
    }
#else
    (void)mode;
#endif
    for (std::size_t i = 0; i < n; ++i) {
        if (violation(i)) {
            return i;
        }
    }
    return n;
}

}  // namespace cforge
