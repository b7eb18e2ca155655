#include "mcb/parallel.hpp"

#include <omp.h>

#include <cstdlib>

namespace mcb {

int thread_count() {
  if (const char* env = std::getenv("MCB_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return omp_get_max_threads();
}

}  // namespace mcb
