#ifndef ORBITCONE_PARALLEL_HPP
#define ORBITCONE_PARALLEL_HPP

#include <cstddef>
#include <exception>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace orbitcone {

/// Execution policy for the sampling kernels. Every parallel kernel has a
/// serial twin that runs the same per-item code in a plain loop; tests compare
/// the two bit for bit and the bench tool times them against each other.
enum class ExecPolicy { Serial, Parallel };

namespace par {

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

/// Fills result[i] = f(i) for i in [0, n). Item order in the result is fixed,
/// so reductions done afterwards do not depend on the thread count. An
/// exception thrown by a work item is captured and rethrown after the region
/// (escaping an OpenMP region would abort the process).
template <class T, class F>
std::vector<T> map_indexed(std::size_t n, ExecPolicy policy, F&& f) {
  std::vector<T> out(n);
  if (policy == ExecPolicy::Serial) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
#ifdef _OPENMP
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 16) shared(error)
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    try {
      out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(orbitcone_map_indexed_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
#else
  for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
#endif
  return out;
}

}  // namespace par
}  // namespace orbitcone

#endif
