#include "cforge/parallel.hpp"

#include <cstdlib>
#include <string>

namespace cforge {

std::size_t max_threads() {
#ifdef _OPENMP
    std::size_t n = static_cast<std::size_t>(omp_get_max_threads());
#else
    std::size_t n = 1;
#endif
    if (const char* env = std::getenv("COCYCLE_FORGE_THREADS")) {
        try {
            const unsigned long cap = std::stoul(env);
            if (cap >= 1 && cap < n) {
                n = cap;
            }
        } catch (...) {
            // Unparsable value: ignore and keep the OpenMP default.
        }
    }
    return n == 0 ? 1 : n;
}

}  // namespace cforge
