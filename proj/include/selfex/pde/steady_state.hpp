#pragma once

#include <span>
#include <string>
#include <vector>

#include "selfex/core/initial_distribution.hpp"
#include "selfex/core/params.hpp"
#include "selfex/pde/grid.hpp"

namespace selfex {

// Closed-form component variance for the difference-kernel steady state.
//   FpConsistent  sigma^2 / (2 (a + omega)), from solving beta P = sigma^2/2 P'
//   SquaredRate   sigma^2 / (2 (a + omega)^2), the squared-rate alternative
// with a = alpha * lambda.
enum class SteadyForm { FpConsistent, SquaredRate };

std::string to_string(SteadyForm form);
SteadyForm steady_form_from_string(const std::string& name);

// Location (a m + omega b) / (a + omega) of the steady component for atom b.
double steady_component_mean(const ModelParams& params, double m, double b);
double steady_component_variance(const ModelParams& params, SteadyForm form);

// Normalized Gaussian N(mean, variance) sampled at the cell centers and
// rescaled so that its midpoint mass is exactly 1. A zero variance gives a
// one-cell spike.
std::vector<double> gaussian_on_grid(double mean, double variance, const Grid1D& grid);

// Steady component of the difference-kernel family for a single atom b.
std::vector<double> steady_state_component(const ModelParams& params, double m, double b,
                                           const Grid1D& grid,
                                           SteadyForm form = SteadyForm::FpConsistent);

// Sum_k w_k of the steady components. Throws DegenerateParams if a + omega = 0.
std::vector<double> steady_state_mixture(const ModelParams& params,
                                         const InitialDistribution& dist, double m,
                                         const Grid1D& grid,
                                         SteadyForm form = SteadyForm::FpConsistent);

// sigma -> 0 limit: b_k -> (a m + omega b_k) / (a + omega), weights kept.
InitialDistribution dirac_contraction_map(const ModelParams& params,
                                          const InitialDistribution& dist, double m);

// Neighbor-value kernel steady state with m = omega m0 / (omega - a),
// m0 = dist.mean(): components at (a m + omega b_k) / omega with variance
// sigma^2 / (2 omega). Requires omega > a.
std::vector<double> steady_state_slant(const ModelParams& params, const InitialDistribution& dist,
                                       const Grid1D& grid);
InitialDistribution slant_contraction_map(const ModelParams& params,
                                          const InitialDistribution& dist);

// Local maxima of a profile above `floor_fraction` times its peak: cells
// strictly higher than both neighbours, with a plateau reported once at its
// first cell.
std::vector<std::size_t> mode_cells(std::span<const double> profile, double floor_fraction = 0.01);
inline std::size_t count_modes(std::span<const double> profile, double floor_fraction = 0.01) {
  return mode_cells(profile, floor_fraction).size();
}

}  // namespace selfex
