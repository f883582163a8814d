#pragma once

#include <algorithm>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

// Parallel kernels follow one pattern: each loop index writes only its own
// output slot, reductions happen serially afterwards. That keeps results
// bit-identical between the serial reference path and the OpenMP path for
// any thread count (NETFORGE_THREADS caps the workers).
namespace netforge::par {

inline int& thread_cap_ref() {
  static int cap = -1;
  return cap;
}

inline void set_thread_cap(int n) { thread_cap_ref() = n; }

inline int max_threads() {
#ifdef _OPENMP
  int n = omp_get_max_threads();
#else
  int n = 1;
#endif
  int cap = thread_cap_ref();
  if (cap < 0) {
    if (const char* env = std::getenv("NETFORGE_THREADS")) {
      cap = std::max(1, std::atoi(env));
      thread_cap_ref() = cap;
    }
  }
  if (cap > 0) n = std::min(n, cap);
  return std::max(1, n);
}

template <class F>
void serial_for(long n, F&& body) {
  for (long i = 0; i < n; ++i) body(i);
}

template <class F>
void parallel_for(long n, F&& body) {
#ifdef _OPENMP
  const int nt = max_threads();
#pragma omp parallel for schedule(static) num_threads(nt)
  for (long i = 0; i < n; ++i) body(i);
#else
  serial_for(n, body);
#endif
}

}  // namespace netforge::par
