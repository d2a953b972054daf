#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "selfex/core/initial_distribution.hpp"
#include "selfex/core/kernel.hpp"
#include "selfex/core/params.hpp"
#include "selfex/pde/grid.hpp"
#include "selfex/simd/kernels.hpp"

namespace selfex {

// Conditional densities P^{b_k}(x) of the McKean-Vlasov law given the initial
// opinion b_k, one row per atom, on a shared grid. The full law is the
// weighted sum of the rows.
class BFamilyDensity {
 public:
  BFamilyDensity(std::vector<Atom> atoms, std::size_t nx);

  // P^{b_k}(0) = delta_{b_k}: all mass in the nearest cell.
  static BFamilyDensity dirac_initial(const InitialDistribution& dist, const Grid1D& grid);

  std::size_t atom_count() const noexcept { return atoms_.size(); }
  std::size_t nx() const noexcept { return nx_; }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }

  std::span<double> row(std::size_t k) noexcept { return {values_.data() + k * nx_, nx_}; }
  std::span<const double> row(std::size_t k) const noexcept {
    return {values_.data() + k * nx_, nx_};
  }

  double t = 0.0;

 private:
  std::vector<Atom> atoms_;
  std::size_t nx_;
  std::vector<double> values_;  // row-major [atom][cell]
};

// UpwindCentered is the first-order donor-cell scheme. UpwindVanLeer keeps
// the same donor selection, diffusion and boundaries but reconstructs the
// donor value with a van Leer limited slope, which removes most of the
// first-order numerical diffusion (about |beta| dx / 2) that otherwise
// dominates sigma^2 / 2 at small sigma.
enum class PdeScheme { UpwindCentered, UpwindVanLeer };

std::string to_string(PdeScheme scheme);
PdeScheme pde_scheme_from_string(const std::string& name);

struct PdeConfig {
  double dt_max = 1.0;
  double cfl_safety = 0.4;
  PdeScheme scheme = PdeScheme::UpwindCentered;
  // Check P >= 0 after every step (throws CflViolation on failure).
  bool check_positivity = true;

  void validate() const;
};

// Sum_k w_k P_k.
std::vector<double> aggregate(const BFamilyDensity& family);

// Midpoint-rule mass and mean of a density on the grid.
double density_mass(std::span<const double> p, const Grid1D& grid);
double density_mean(std::span<const double> p, const Grid1D& grid);
double density_second_moment(std::span<const double> p, const Grid1D& grid);

// beta^{b_k,P}(x_i) at every cell center:
//   alpha lambda * sum_k' w_k' integral P_k'(y) h(y, x) dy + omega (b_k - x).
// Linear kernels use the closed form in the aggregate mean unless
// `force_quadrature` is set; other kernels use a midpoint double quadrature
// over the aggregated density.
std::vector<double> drift_field(const BFamilyDensity& family, std::size_t k,
                                const ModelParams& params, const InteractionKernel& kernel,
                                const Grid1D& grid, bool force_quadrature = false);

struct FpStepInfo {
  double dt = 0.0;
  double max_abs_velocity = 0.0;
  double max_mass_change = 0.0;  // largest per-row |mass after - mass before|
  double min_value = 0.0;
};

// One conservative finite-volume step of every row: upwind advective flux
// with face velocities averaged from the adjacent centers, centered
// diffusion, zero-flux boundaries. The interaction term is evaluated once from
// the step-start aggregate and shared by all rows. dt is
// cfl_safety * min(dx / max|beta|, dx^2 / sigma^2), capped by dt_max and
// `dt_cap`.
BFamilyDensity fp_step(const BFamilyDensity& family, const ModelParams& params,
                       const InteractionKernel& kernel, const Grid1D& grid, const PdeConfig& cfg,
                       double dt_cap = 0.0, FpStepInfo* info = nullptr,
                       const simd::KernelTable* kernels = nullptr);

struct EvolveDiagnostics {
  std::size_t steps = 0;
  double max_row_mass_drift = 0.0;   // over the whole run, vs the initial mass
  double max_step_mass_change = 0.0;
  double min_value = 0.0;
  double max_boundary_mass = 0.0;    // outermost cell of each row
  double initial_second_moment = 0.0;
  double max_second_moment = 0.0;    // of the aggregate, over every step
};

struct DensitySnapshot {
  double t;
  BFamilyDensity family;
};

struct EvolveResult {
  std::vector<DensitySnapshot> snapshots;
  EvolveDiagnostics diagnostics;
};

// Steps from family.t to t_end, landing exactly on each requested record time
// (times outside [family.t, t_end] are ignored). Throws DomainOverflow when
// the outermost cells of any row hold more than 1e-6 mass.
EvolveResult evolve(BFamilyDensity family, const ModelParams& params,
                    const InteractionKernel& kernel, const Grid1D& grid, const PdeConfig& cfg,
                    double t_end, std::vector<double> record_times,
                    const simd::KernelTable* kernels = nullptr);

// CSV with a metadata comment block, then x, P_agg, P_1..P_K per cell.
void write_density_csv(std::ostream& out, const BFamilyDensity& family, const Grid1D& grid,
                       const ModelParams& params);

}  // namespace selfex
