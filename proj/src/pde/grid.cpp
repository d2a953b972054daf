#include "selfex/pde/grid.hpp"

#include <cmath>

#include "selfex/core/error.hpp"

namespace selfex {

void Grid1D::validate() const {
  require(std::isfinite(x_min) && std::isfinite(x_max) && x_min < x_max,
          "grid needs x_min < x_max");
  require(nx >= 16, "grid needs nx >= 16");
}

std::size_t Grid1D::nearest_cell(double x) const noexcept {
  // Measured from the domain midpoint so that x and its mirror image give
  // positions symmetric about (nx - 1) / 2 in floating point.
  const double mid = 0.5 * (x_min + x_max);
  const double pos = (x - mid) / dx() + 0.5 * static_cast<double>(nx - 1);
  if (pos <= 0.0) return 0;
  const auto last = static_cast<double>(nx - 1);
  if (pos >= last) return nx - 1;
  const double lower = std::floor(pos);
  const double frac = pos - lower;
  auto cell = static_cast<std::size_t>(lower);
  if (frac > 0.5) {
    ++cell;
  } else if (frac == 0.5) {
    const double middle = 0.5 * last;
    if (std::fabs(lower + 1.0 - middle) < std::fabs(lower - middle)) ++cell;
  }
  return cell;
}

}  // namespace selfex
