#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include "selfex/core/kernel.hpp"

namespace selfex::simd {

enum class Level { Scalar, Avx2 };

std::string to_string(Level level);

// Plain-data view of an InteractionKernel for the inner loops.
struct KernelShape {
  KernelKind kind = KernelKind::LinearDifference;
  double delta2 = 0.0;
  double inv_ramp = 0.0;

  static KernelShape of(const InteractionKernel& kernel) noexcept {
    return {kernel.kind(), kernel.delta2(), kernel.inverse_ramp()};
  }
};

// Coefficients of one Euler-Maruyama update
//   x <- x + dt * (omega * (b - x) + drift0 + drift1 * x) + noise_scale * xi + extra
struct EulerCoeffs {
  double dt = 0.0;
  double omega = 0.0;
  double drift0 = 0.0;
  double drift1 = 0.0;
  double noise_scale = 0.0;
};

struct WeightedSums {
  double w = 0.0;    // sum w_i
  double wx = 0.0;   // sum w_i x_i
  double wxx = 0.0;  // sum w_i x_i^2
};

// Function table for one instruction set. Every elementwise entry performs the
// same IEEE operations in the same order in every variant, so results are
// bit-identical across levels; only weighted_sums reassociates.
struct KernelTable {
  Level level;

  // x[i] updated in place; `extra` may be empty (treated as zeros).
  void (*euler_update)(std::span<double> x, std::span<const double> b,
                       std::span<const double> xi, std::span<const double> extra,
                       const EulerCoeffs& c);

  // out[i] += weight * h(source, x[i]) for every i != skip.
  void (*broadcast_jump)(std::span<double> out, std::span<const double> x, double source,
                         double weight, std::size_t skip, const KernelShape& h);

  // Pre-step jump sum of the linear kernels in O(1) per particle:
  //   out[i] = scale * ((s1 - k[i] x[i]) - self * x[i] (s0 - k[i]))
  // with s1 = sum_j k[j] x[j], s0 = sum_j k[j]; self = 1 for the difference
  // kernel, 0 for the neighbor-value kernel.
  void (*linear_jump)(std::span<double> out, std::span<const double> x,
                      std::span<const double> counts, double s1, double s0, double scale,
                      double self);

  // out[i] = scale * sum_j w[j] h(sources[j], targets[i]); empty w means w = 1.
  // Sums over j run in ascending order for every i.
  void (*pair_sum)(std::span<double> out, std::span<const double> targets,
                   std::span<const double> sources, std::span<const double> w, double scale,
                   const KernelShape& h);

  // One conservative finite-volume step with upwind advection and centered
  // diffusion. face_velocity has n+1 entries; the two boundary faces carry no
  // flux. flux is scratch of size n+1.
  void (*fv_advance)(std::span<double> p_out, std::span<const double> p_in,
                     std::span<const double> face_velocity, std::span<double> flux,
                     double dt_over_dx, double diffusion_over_dx);

  // Same step with the donor-cell value replaced by its van Leer limited
  // reconstruction at the face, p[d] +- 0.5 * slope[d]. slope is scratch of
  // size n; the boundary cells use zero slope.
  void (*fv_advance_limited)(std::span<double> p_out, std::span<const double> p_in,
                             std::span<const double> face_velocity, std::span<double> flux,
                             std::span<double> slope, double dt_over_dx,
                             double diffusion_over_dx);

  WeightedSums (*weighted_sums)(std::span<const double> w, std::span<const double> x);
};

const KernelTable& scalar_table() noexcept;
// Null when the binary was built without that variant.
const KernelTable* avx2_table() noexcept;

bool cpu_supports(Level level) noexcept;

// Best level supported by both the build and the CPU. The environment variable
// SELFEX_SIMD=scalar|avx2 caps the choice.
const KernelTable& active() noexcept;
const KernelTable& table_for(Level level);

}  // namespace selfex::simd
