#include "selfex/pde/fokker_planck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "selfex/core/error.hpp"
#include "selfex/io/text.hpp"

namespace selfex {

BFamilyDensity::BFamilyDensity(std::vector<Atom> atoms, std::size_t nx)
    : atoms_(std::move(atoms)), nx_(nx), values_(atoms_.size() * nx, 0.0) {
  require(!atoms_.empty(), "density family needs at least one atom");
}

BFamilyDensity BFamilyDensity::dirac_initial(const InitialDistribution& dist, const Grid1D& grid) {
  grid.validate();
  require(dist.kind() == InitialDistribution::Kind::Atoms,
          "density family needs an atom initial law (discretize uniform laws first)");
  BFamilyDensity family(dist.atom_list(), grid.nx);
  const double height = 1.0 / grid.dx();
  for (std::size_t k = 0; k < family.atom_count(); ++k) {
    family.row(k)[grid.nearest_cell(family.atoms()[k].location)] = height;
  }
  return family;
}

std::string to_string(PdeScheme scheme) {
  return scheme == PdeScheme::UpwindCentered ? "upwind_centered" : "upwind_van_leer";
}

PdeScheme pde_scheme_from_string(const std::string& name) {
  if (name == "upwind_centered") return PdeScheme::UpwindCentered;
  if (name == "upwind_van_leer") return PdeScheme::UpwindVanLeer;
  fail(ErrorCode::InvalidArgument, "unknown pde scheme '" + name + "'");
}

void PdeConfig::validate() const {
  require(std::isfinite(dt_max) && dt_max > 0.0, "pde dt_max must be > 0");
  require(cfl_safety > 0.0 && cfl_safety <= 1.0, "pde cfl_safety must be in (0, 1]");
}

std::vector<double> aggregate(const BFamilyDensity& family) {
  std::vector<double> agg(family.nx(), 0.0);
  for (std::size_t k = 0; k < family.atom_count(); ++k) {
    const double w = family.atoms()[k].weight;
    const auto row = family.row(k);
    for (std::size_t i = 0; i < agg.size(); ++i) agg[i] += w * row[i];
  }
  return agg;
}

double density_mass(std::span<const double> p, const Grid1D& grid) {
  double s = 0.0;
  for (const double v : p) s += v;
  return s * grid.dx();
}

double density_mean(std::span<const double> p, const Grid1D& grid) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += p[i] * grid.center(i);
  return s * grid.dx();
}

double density_second_moment(std::span<const double> p, const Grid1D& grid) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double x = grid.center(i);
    s += p[i] * x * x;
  }
  return s * grid.dx();
}

namespace {

std::vector<double> cell_centers(const Grid1D& grid) {
  std::vector<double> c(grid.nx);
  for (std::size_t i = 0; i < grid.nx; ++i) c[i] = grid.center(i);
  return c;
}

bool has_closed_form(KernelKind kind) {
  return kind == KernelKind::LinearDifference || kind == KernelKind::NeighborValue;
}

// alpha lambda * integral P(y) h(y, x_i) dy for every center, P the aggregate.
std::vector<double> interaction_field(const std::vector<double>& agg,
                                      const std::vector<double>& centers,
                                      const ModelParams& params, const InteractionKernel& kernel,
                                      const Grid1D& grid, bool force_quadrature,
                                      const simd::KernelTable& k) {
  const double rate = params.coupling();
  std::vector<double> field(centers.size());
  if (!force_quadrature && has_closed_form(kernel.kind())) {
    const double m = density_mean(agg, grid);
    if (kernel.kind() == KernelKind::LinearDifference) {
      for (std::size_t i = 0; i < centers.size(); ++i) field[i] = rate * (m - centers[i]);
    } else {
      std::fill(field.begin(), field.end(), rate * m);
    }
    return field;
  }
  std::vector<double> w(agg.size());
  const double dx = grid.dx();
  for (std::size_t j = 0; j < agg.size(); ++j) w[j] = agg[j] * dx;
  k.pair_sum(field, centers, centers, w, rate, simd::KernelShape::of(kernel));
  return field;
}

}  // namespace

std::vector<double> drift_field(const BFamilyDensity& family, std::size_t k,
                                const ModelParams& params, const InteractionKernel& kernel,
                                const Grid1D& grid, bool force_quadrature) {
  require(k < family.atom_count(), "atom index out of range");
  require(family.nx() == grid.nx, "family does not match the grid");
  const auto centers = cell_centers(grid);
  auto field = interaction_field(aggregate(family), centers, params, kernel, grid,
                                 force_quadrature, simd::active());
  const double b = family.atoms()[k].location;
  for (std::size_t i = 0; i < field.size(); ++i) field[i] += params.omega * (b - centers[i]);
  return field;
}

BFamilyDensity fp_step(const BFamilyDensity& family, const ModelParams& params,
                       const InteractionKernel& kernel, const Grid1D& grid, const PdeConfig& cfg,
                       double dt_cap, FpStepInfo* info, const simd::KernelTable* kernels) {
  require(family.nx() == grid.nx, "family does not match the grid");
  const auto& kt = kernels != nullptr ? *kernels : simd::active();
  const std::size_t nx = grid.nx;
  const std::size_t rows = family.atom_count();
  const double dx = grid.dx();
  const auto centers = cell_centers(grid);
  const auto field =
      interaction_field(aggregate(family), centers, params, kernel, grid, false, kt);

  // Face velocities for every row, and the largest |beta| for the CFL bound.
  std::vector<double> faces(rows * (nx + 1), 0.0);
  double vmax = 0.0;
  bool finite = true;
  for (std::size_t r = 0; r < rows; ++r) {
    const double b = family.atoms()[r].location;
    double prev = field[0] + params.omega * (b - centers[0]);
    finite = finite && std::isfinite(prev);
    vmax = std::max(vmax, std::fabs(prev));
    double* v = faces.data() + r * (nx + 1);
    for (std::size_t i = 1; i < nx; ++i) {
      const double beta = field[i] + params.omega * (b - centers[i]);
      finite = finite && std::isfinite(beta);
      vmax = std::max(vmax, std::fabs(beta));
      v[i] = 0.5 * (prev + beta);
      prev = beta;
    }
  }
  if (!finite) fail(ErrorCode::CflViolation, "non-finite drift field");

  const double sigma2 = params.sigma * params.sigma;
  double dt = cfg.dt_max;
  if (vmax > 0.0) dt = std::min(dt, cfg.cfl_safety * dx / vmax);
  if (sigma2 > 0.0) dt = std::min(dt, cfg.cfl_safety * dx * dx / sigma2);
  if (dt_cap > 0.0) dt = std::min(dt, dt_cap);
  if (!(dt > 0.0) || !std::isfinite(dt)) fail(ErrorCode::CflViolation, "no admissible time step");

  BFamilyDensity next = family;
  std::vector<double> flux(nx + 1);
  std::vector<double> slope(cfg.scheme == PdeScheme::UpwindVanLeer ? nx : 0);
  const double diffusion_over_dx = 0.5 * sigma2 / dx;
  double max_change = 0.0;
  double min_value = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < rows; ++r) {
    const auto in = family.row(r);
    auto out = next.row(r);
    const std::span<const double> v{faces.data() + r * (nx + 1), nx + 1};
    if (cfg.scheme == PdeScheme::UpwindVanLeer) {
      kt.fv_advance_limited(out, in, v, flux, slope, dt / dx, diffusion_over_dx);
    } else {
      kt.fv_advance(out, in, v, flux, dt / dx, diffusion_over_dx);
    }
    double before = 0.0, after = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
      before += in[i];
      after += out[i];
      min_value = std::min(min_value, out[i]);
    }
    max_change = std::max(max_change, std::fabs(after - before) * dx);
  }
  if (cfg.check_positivity && min_value < 0.0) {
    // Roundoff-level undershoot is tolerated; anything larger is a scheme failure.
    if (min_value < -1e-14) fail(ErrorCode::CflViolation, "density lost positivity");
  }
  next.t = family.t + dt;
  if (info != nullptr) *info = {dt, vmax, max_change, min_value};
  return next;
}

EvolveResult evolve(BFamilyDensity family, const ModelParams& params,
                    const InteractionKernel& kernel, const Grid1D& grid, const PdeConfig& cfg,
                    double t_end, std::vector<double> record_times,
                    const simd::KernelTable* kernels) {
  params.validate();
  grid.validate();
  cfg.validate();
  require(family.nx() == grid.nx, "family does not match the grid");
  require(std::isfinite(t_end) && t_end >= family.t, "t_end must not precede the family time");

  std::sort(record_times.begin(), record_times.end());
  record_times.erase(std::unique(record_times.begin(), record_times.end()), record_times.end());
  std::erase_if(record_times, [&](double t) { return t < family.t || t > t_end; });

  EvolveResult result;
  auto& diag = result.diagnostics;
  const double dx = grid.dx();
  std::vector<double> initial_mass(family.atom_count());
  for (std::size_t k = 0; k < family.atom_count(); ++k) {
    initial_mass[k] = density_mass(family.row(k), grid);
  }
  const auto track = [&](const BFamilyDensity& f) {
    for (std::size_t k = 0; k < f.atom_count(); ++k) {
      const auto row = f.row(k);
      diag.max_row_mass_drift =
          std::max(diag.max_row_mass_drift, std::fabs(density_mass(row, grid) - initial_mass[k]));
      diag.max_boundary_mass = std::max(diag.max_boundary_mass, (row.front() + row.back()) * dx);
    }
    diag.max_second_moment = std::max(diag.max_second_moment,
                                      density_second_moment(aggregate(f), grid));
  };
  diag.initial_second_moment = density_second_moment(aggregate(family), grid);
  diag.max_second_moment = diag.initial_second_moment;
  track(family);

  std::size_t next_record = 0;
  const auto emit_due = [&] {
    while (next_record < record_times.size() && record_times[next_record] <= family.t) {
      result.snapshots.push_back({family.t, family});
      ++next_record;
    }
  };
  emit_due();

  while (family.t < t_end) {
    const double target = next_record < record_times.size() ? record_times[next_record] : t_end;
    FpStepInfo info;
    family = fp_step(family, params, kernel, grid, cfg, target - family.t, &info, kernels);
    if (target - family.t <= 1e-12 * std::max(1.0, std::fabs(target))) family.t = target;
    ++diag.steps;
    diag.max_step_mass_change = std::max(diag.max_step_mass_change, info.max_mass_change);
    diag.min_value = std::min(diag.min_value, info.min_value);
    track(family);
    if (diag.max_boundary_mass > 1e-6) {
      fail(ErrorCode::DomainOverflow, "boundary cells hold " + io::number(diag.max_boundary_mass) +
                                          " mass at t=" + io::number(family.t));
    }
    emit_due();
  }
  return result;
}

void write_density_csv(std::ostream& out, const BFamilyDensity& family, const Grid1D& grid,
                       const ModelParams& params) {
  out << "# schema=selfex.density.csv version=" << io::kSchemaVersion << '\n';
  out << "# t=" << io::number(family.t) << " omega=" << io::number(params.omega)
      << " alpha=" << io::number(params.alpha) << " sigma=" << io::number(params.sigma)
      << " lambda=" << io::number(params.lambda) << '\n';
  out << "# x_min=" << io::number(grid.x_min) << " x_max=" << io::number(grid.x_max)
      << " nx=" << grid.nx << '\n';
  out << "# atoms=";
  for (std::size_t k = 0; k < family.atom_count(); ++k) {
    if (k) out << ';';
    out << io::number(family.atoms()[k].location) << ':' << io::number(family.atoms()[k].weight);
  }
  out << '\n';
  out << "x,P_agg";
  for (std::size_t k = 0; k < family.atom_count(); ++k) out << ",P_" << (k + 1);
  out << '\n';
  const auto agg = aggregate(family);
  for (std::size_t i = 0; i < grid.nx; ++i) {
    out << io::number(grid.center(i)) << ',' << io::number(agg[i]);
    for (std::size_t k = 0; k < family.atom_count(); ++k) out << ',' << io::number(family.row(k)[i]);
    out << '\n';
  }
}

}  // namespace selfex
