#pragma once

#include <cstdint>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qps::par {

// Execution mode for grid kernels. Every kernel writes result i into slot i,
// so serial and openmp produce byte-identical output; the serial path is the
// reference the tests compare against.
enum class Exec { serial, openmp };

inline int max_workers() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// workers <= 0 means "library default" (OMP_NUM_THREADS / hardware).
template <typename Fn>
void for_index(std::int64_t n, Exec exec, int workers, Fn&& fn) {
    if (exec == Exec::serial || n < 2) {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
#ifdef _OPENMP
    if (workers > 0) {
#pragma omp parallel for schedule(static) num_threads(workers)
        for (std::int64_t i = 0; i < n; ++i) fn(i);
    } else {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < n; ++i) fn(i);
    }
#else
    (void)workers;
    for (std::int64_t i = 0; i < n; ++i) fn(i);
#endif
}

template <typename Fn>
void for_index(std::int64_t n, Fn&& fn) {
    for_index(n, Exec::openmp, 0, fn);
}

}  // namespace qps::par
