#include "nalbn/rng.hpp"

#include <limits>

namespace nalbn {

std::uint64_t Rng::below(std::uint64_t bound) {
  // Largest multiple of bound representable; reject draws above it.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % bound;
}

}  // namespace nalbn
