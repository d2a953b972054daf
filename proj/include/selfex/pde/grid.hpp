#pragma once

#include <cstddef>

namespace selfex {

// Uniform cell-centered grid on [x_min, x_max].
struct Grid1D {
  double x_min = -15.0;
  double x_max = 15.0;
  std::size_t nx = 1200;

  // Throws unless x_min < x_max and nx >= 16.
  void validate() const;

  double dx() const noexcept { return (x_max - x_min) / static_cast<double>(nx); }
  double center(std::size_t i) const noexcept {
    return x_min + (static_cast<double>(i) + 0.5) * dx();
  }
  double face(std::size_t f) const noexcept { return x_min + static_cast<double>(f) * dx(); }

  // Cell whose center is nearest to x, clamped to the grid. Exact ties (x on
  // a face) go to the cell nearer the middle of the domain, so mirror-image
  // inputs land in mirror-image cells.
  std::size_t nearest_cell(double x) const noexcept;
};

}  // namespace selfex
