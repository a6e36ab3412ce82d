#include "condot/parallel.hpp"

#include <exception>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace condot {

void parallel_for(int n, int jobs, const std::function<void(int)>& body) {
  if (n <= 0) return;

#ifdef _OPENMP
  if (jobs != 1) {
    const int threads = jobs <= 0 ? omp_get_max_threads() : jobs;
    std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (int i = 0; i < n; ++i) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
    // Rethrow the lowest-index failure so aborts are deterministic too.
    for (int i = 0; i < n; ++i)
      if (errors[i]) std::rethrow_exception(errors[i]);
    return;
  }
#endif

  // Serial reference path (jobs == 1, or OpenMP unavailable).
  for (int i = 0; i < n; ++i) body(i);
}

}  // namespace condot
