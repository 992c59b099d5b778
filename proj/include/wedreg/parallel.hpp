#pragma once

// Thin wrapper so that the rest of the code builds with or without OpenMP.

#ifdef _OPENMP
#include <omp.h>
#endif

namespace wedreg {

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline int thread_num() {
#ifdef _OPENMP
  return omp_get_thread_num();
#else
  return 0;
#endif
}

}  // namespace wedreg
