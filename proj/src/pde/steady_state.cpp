#include "selfex/pde/steady_state.hpp"

#include <algorithm>
#include <cmath>

#include "selfex/core/error.hpp"
#include "selfex/pde/slant.hpp"

namespace selfex {

std::string to_string(SteadyForm form) {
  return form == SteadyForm::FpConsistent ? "fp_consistent" : "squared_rate";
}

SteadyForm steady_form_from_string(const std::string& name) {
  if (name == "fp_consistent") return SteadyForm::FpConsistent;
  if (name == "squared_rate") return SteadyForm::SquaredRate;
  fail(ErrorCode::InvalidArgument, "unknown steady form '" + name + "'");
}

namespace {

double contraction_rate(const ModelParams& params) {
  const double r = params.coupling() + params.omega;
  if (!(r > 0.0)) fail(ErrorCode::DegenerateParams, "steady state needs alpha*lambda + omega > 0");
  return r;
}

}  // namespace

double steady_component_mean(const ModelParams& params, double m, double b) {
  return (params.coupling() * m + params.omega * b) / contraction_rate(params);
}

double steady_component_variance(const ModelParams& params, SteadyForm form) {
  const double r = contraction_rate(params);
  const double s2 = params.sigma * params.sigma;
  return form == SteadyForm::FpConsistent ? s2 / (2.0 * r) : s2 / (2.0 * r * r);
}

std::vector<double> gaussian_on_grid(double mean, double variance, const Grid1D& grid) {
  std::vector<double> p(grid.nx, 0.0);
  if (variance <= 0.0) {
    p[grid.nearest_cell(mean)] = 1.0 / grid.dx();
    return p;
  }
  double mass = 0.0;
  for (std::size_t i = 0; i < grid.nx; ++i) {
    const double z = grid.center(i) - mean;
    p[i] = std::exp(-0.5 * z * z / variance);
    mass += p[i];
  }
  if (mass == 0.0) {
    p[grid.nearest_cell(mean)] = 1.0 / grid.dx();
    return p;
  }
  const double norm = 1.0 / (mass * grid.dx());
  for (auto& v : p) v *= norm;
  return p;
}

std::vector<double> steady_state_component(const ModelParams& params, double m, double b,
                                           const Grid1D& grid, SteadyForm form) {
  return gaussian_on_grid(steady_component_mean(params, m, b),
                          steady_component_variance(params, form), grid);
}

namespace {

std::vector<double> mixture(const std::vector<Atom>& atoms, double variance, const Grid1D& grid) {
  std::vector<double> out(grid.nx, 0.0);
  for (const auto& a : atoms) {
    const auto comp = gaussian_on_grid(a.location, variance, grid);
    for (std::size_t i = 0; i < grid.nx; ++i) out[i] += a.weight * comp[i];
  }
  return out;
}

std::vector<Atom> atoms_of(const InitialDistribution& dist) {
  if (dist.kind() == InitialDistribution::Kind::Atoms) return dist.atom_list();
  return discretize_initial(dist, 256).atom_list();
}

}  // namespace

InitialDistribution dirac_contraction_map(const ModelParams& params,
                                          const InitialDistribution& dist, double m) {
  std::vector<Atom> atoms = atoms_of(dist);
  for (auto& a : atoms) a.location = steady_component_mean(params, m, a.location);
  return InitialDistribution::atoms(std::move(atoms));
}

std::vector<double> steady_state_mixture(const ModelParams& params,
                                         const InitialDistribution& dist, double m,
                                         const Grid1D& grid, SteadyForm form) {
  grid.validate();
  const double variance = steady_component_variance(params, form);
  return mixture(dirac_contraction_map(params, dist, m).atom_list(), variance, grid);
}

InitialDistribution slant_contraction_map(const ModelParams& params,
                                          const InitialDistribution& dist) {
  const double m_inf = slant_mean_limit(params, dist.mean());
  std::vector<Atom> atoms = atoms_of(dist);
  for (auto& a : atoms) {
    a.location = (params.coupling() * m_inf + params.omega * a.location) / params.omega;
  }
  return InitialDistribution::atoms(std::move(atoms));
}

std::vector<double> steady_state_slant(const ModelParams& params, const InitialDistribution& dist,
                                       const Grid1D& grid) {
  grid.validate();
  const double variance = params.sigma * params.sigma / (2.0 * params.omega);
  return mixture(slant_contraction_map(params, dist).atom_list(), variance, grid);
}

std::vector<std::size_t> mode_cells(std::span<const double> profile, double floor_fraction) {
  std::vector<std::size_t> modes;
  if (profile.empty()) return modes;
  const double peak = *std::max_element(profile.begin(), profile.end());
  const double floor = floor_fraction * peak;
  const std::size_t n = profile.size();
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && profile[j + 1] == profile[i]) ++j;  // plateau [i, j]
    const bool left_lower = i == 0 || profile[i - 1] < profile[i];
    const bool right_lower = j + 1 == n || profile[j + 1] < profile[i];
    if (left_lower && right_lower && profile[i] > floor) modes.push_back(i);
    i = j + 1;
  }
  return modes;
}

}  // namespace selfex
