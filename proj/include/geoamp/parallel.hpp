#pragma once

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace geoamp {

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

// Evaluate f(i) for i in [0,n) into a vector. Results are indexed by i, so the
// output is identical for any thread count.
template <class F>
std::vector<double> parallel_map(std::size_t n, F&& f) {
    std::vector<double> out(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long i = 0; i < (long long)n; ++i) out[std::size_t(i)] = f(std::size_t(i));
    return out;
}

template <class F>
void parallel_for(std::size_t n, F&& f) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long i = 0; i < (long long)n; ++i) f(std::size_t(i));
}

}  // namespace geoamp
