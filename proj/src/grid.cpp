#include "afwl/grid.hpp"

#include <cmath>

#include "afwl/error.hpp"

namespace afwl {

void Grid3::validate() const {
  require(n >= 16 && n % 2 == 0, ErrorKind::Config,
          "grid n must be even and >= 16 (got " + std::to_string(n) + ")");
  require(dx > 0.0 && std::isfinite(dx), ErrorKind::Config, "grid dx must be positive");
}

bool ScalarField::all_finite() const {
  for (double v : values)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace afwl
