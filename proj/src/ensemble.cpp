#include "tamed/ensemble.hpp"

#include <cstdlib>
#include <string>

namespace tamed {

int default_thread_count() {
  if (const char* env = std::getenv("TAMED_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace tamed
