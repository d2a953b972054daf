#pragma once

#include <cmath>

#include "selfex/simd/kernels.hpp"

namespace selfex::simd::detail {

// Same operation sequence as InteractionKernel::operator() and the AVX2 lanes.
inline double eval_shape(const KernelShape& h, double y, double x) noexcept {
  switch (h.kind) {
    case KernelKind::LinearDifference:
      return y - x;
    case KernelKind::BoundedConfidence: {
      const double d = y - x;
      double k = (h.delta2 - std::fabs(d)) * h.inv_ramp;
      k = k > 0.0 ? k : 0.0;
      k = k < 1.0 ? k : 1.0;
      return d * k;
    }
    case KernelKind::NeighborValue:
      return y;
  }
  return 0.0;
}

// Harmonic-mean slope limiter; zero at extrema.
inline double van_leer(double a, double b) noexcept {
  const double ab = a * b;
  return ab > 0.0 ? (ab + ab) / (a + b) : 0.0;
}

}  // namespace selfex::simd::detail
