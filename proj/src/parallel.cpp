#include "poisson_chaos/parallel.hpp"

#include <cstdlib>
#include <string>

namespace poisson_chaos {

std::size_t worker_count() {
  if (const char* env = std::getenv("POISSON_CHAOS_THREADS"); env != nullptr && *env != '\0') {
    try {
      const long v = std::stol(env);
      if (v >= 1) {
        return static_cast<std::size_t>(v);
      }
    } catch (const std::exception&) {
      // unparsable values fall back to the hardware default
    }
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

}  // namespace poisson_chaos
