#include "confforge/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace confforge {

int effective_threads() {
  int threads = omp_get_max_threads();
  if (const char* env = std::getenv("CONFFORGE_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap > 0 && cap < threads) threads = cap;
    } catch (...) {
      // Unparseable values leave the OpenMP default in place.
    }
  }
  return threads < 1 ? 1 : threads;
}

}  // namespace confforge
