#include "selfex/experiments/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "selfex/analysis/metrics.hpp"
#include "selfex/core/error.hpp"
#include "selfex/core/parallel.hpp"
#include "selfex/io/text.hpp"
#include "selfex/particles/experiments.hpp"
#include "selfex/particles/trajectory.hpp"
#include "selfex/pde/slant.hpp"
#include "selfex/pde/steady_state.hpp"

namespace selfex {

namespace {

namespace fs = std::filesystem;
using io::number;

std::string experiment_id(const ExperimentConfig& cfg) {
  return cfg.id.empty() ? to_string(cfg.experiment) : cfg.id;
}

void log(const RunContext& ctx, const std::string& msg) {
  if (ctx.verbose) std::cerr << "[selfex] " << msg << '\n';
}

void write_file(const RunContext& ctx, const std::string& name, const std::string& content,
                CommandResult& result) {
  std::error_code ec;
  fs::create_directories(ctx.out_dir, ec);
  if (ec) fail(ErrorCode::IoError, "cannot create " + ctx.out_dir.string() + ": " + ec.message());
  const fs::path path = ctx.out_dir / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.close();
  if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
  result.outputs.push_back(name);
}

void write_manifest(const ExperimentConfig& cfg, const RunContext& ctx, CommandResult& result) {
  const auto outputs = result.outputs;
  write_file(ctx, "manifest.json", make_manifest(cfg, outputs).dump(2) + "\n", result);
}

// experiment_id,t,N,metric,value rows; N is empty for grid-only quantities.
class MetricTable {
 public:
  explicit MetricTable(std::string id) : id_(std::move(id)) {
    out_ << "# schema=selfex.metrics.csv version=" << io::kSchemaVersion << '\n';
    out_ << "experiment_id,t,N,metric,value\n";
  }
  void add(double t, std::size_t n, const std::string& metric, double value) {
    out_ << id_ << ',' << number(t) << ',' << n << ',' << metric << ',' << number(value) << '\n';
  }
  void add(double t, const std::string& metric, double value) {
    out_ << id_ << ',' << number(t) << ",," << metric << ',' << number(value) << '\n';
  }
  std::string str() const { return out_.str(); }

 private:
  std::string id_;
  std::ostringstream out_;
};

std::string rate_fit_csv(const std::string& id, const RateFit& fit) {
  std::ostringstream out;
  out << "# schema=selfex.rate_fit.csv version=" << io::kSchemaVersion << '\n';
  out << "experiment_id,slope,intercept,r2\n";
  out << id << ',' << number(fit.slope) << ',' << number(fit.intercept) << ',' << number(fit.r2)
      << '\n';
  return out.str();
}

void check(const ExperimentConfig& cfg, CommandResult& result, bool ok, const std::string& what) {
  if (cfg.check && !ok) result.failed_checks.push_back(what);
}

InitialDistribution pde_initial(const ExperimentConfig& cfg) {
  if (cfg.initial.kind() == InitialDistribution::Kind::Atoms) return cfg.initial;
  return discretize_initial(cfg.initial, cfg.initial_quadrature);
}

EvolveResult run_pde(const ExperimentConfig& cfg, const ModelParams& params, double t_end,
                     std::vector<double> record_times) {
  record_times.push_back(t_end);
  return evolve(BFamilyDensity::dirac_initial(pde_initial(cfg), cfg.grid), params, cfg.kernel,
                cfg.grid, cfg.pde, t_end, std::move(record_times));
}

const DensitySnapshot& snapshot_at(const EvolveResult& r, double t) {
  for (const auto& s : r.snapshots) {
    if (s.t == t) return s;
  }
  fail(ErrorCode::InvalidArgument, "no density snapshot at t=" + number(t));
}

// Mass of the aggregate on x < 0; a cell centered at 0 is split evenly.
double left_mass(std::span<const double> p, const Grid1D& grid) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double c = grid.center(i);
    if (c < 0.0) s += p[i];
    else if (c == 0.0) s += 0.5 * p[i];
  }
  return s * grid.dx();
}

// max_i |P(x_i) - P(-x_i)| on a grid symmetric about 0; NaN otherwise.
double asymmetry(std::span<const double> p, const Grid1D& grid) {
  if (grid.x_min != -grid.x_max) return std::nan("");
  double worst = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) worst = std::max(worst, std::fabs(p[i] - p[p.size() - 1 - i]));
  return worst;
}

void density_metrics(MetricTable& table, double t, const BFamilyDensity& family,
                     const Grid1D& grid) {
  const auto agg = aggregate(family);
  table.add(t, "mass", density_mass(agg, grid));
  table.add(t, "mean", density_mean(agg, grid));
  table.add(t, "second_moment", density_second_moment(agg, grid));
  table.add(t, "modes", static_cast<double>(count_modes(agg)));
  const double asym = asymmetry(agg, grid);
  if (!std::isnan(asym)) table.add(t, "asymmetry", asym);
}

void diagnostics_metrics(MetricTable& table, double t, const EvolveDiagnostics& d,
                         const std::string& prefix) {
  table.add(t, prefix + "steps", static_cast<double>(d.steps));
  table.add(t, prefix + "max_row_mass_drift", d.max_row_mass_drift);
  table.add(t, prefix + "max_step_mass_change", d.max_step_mass_change);
  table.add(t, prefix + "min_value", d.min_value);
  table.add(t, prefix + "max_boundary_mass", d.max_boundary_mass);
  table.add(t, prefix + "second_moment_ratio",
            d.initial_second_moment > 0.0 ? d.max_second_moment / d.initial_second_moment : 0.0);
}

std::string grid_header(const std::string& schema, const ExperimentConfig& cfg,
                        const ModelParams& params, double t) {
  std::ostringstream out;
  out << "# schema=" << schema << " version=" << io::kSchemaVersion << '\n';
  out << "# t=" << number(t) << " omega=" << number(params.omega)
      << " alpha=" << number(params.alpha) << " sigma=" << number(params.sigma)
      << " lambda=" << number(params.lambda) << " kernel=" << to_string(cfg.kernel.kind()) << '\n';
  return out.str();
}

// x, named columns, one row per cell.
std::string columns_csv(const std::string& header, const Grid1D& grid,
                        const std::vector<std::string>& names,
                        const std::vector<std::vector<double>>& cols) {
  std::ostringstream out;
  out << header << 'x';
  for (const auto& n : names) out << ',' << n;
  out << '\n';
  for (std::size_t i = 0; i < grid.nx; ++i) {
    out << number(grid.center(i));
    for (const auto& c : cols) out << ',' << number(c[i]);
    out << '\n';
  }
  return out.str();
}

std::optional<MeanFieldDrift> default_drift(const ExperimentConfig& cfg) {
  if (cfg.process != ProcessKind::MckeanVlasov) return std::nullopt;
  switch (cfg.kernel.kind()) {
    case KernelKind::LinearDifference:
      return MeanFieldDrift::analytic_linear(cfg.initial.mean());
    case KernelKind::NeighborValue:
      return MeanFieldDrift::analytic_slant(cfg.initial.mean());
    case KernelKind::BoundedConfidence:
      break;
  }
  // No closed form: freeze the mean-field term at an independent initial pool.
  const SeededStream pool_stream(cfg.seed, 1);
  return MeanFieldDrift::frozen_empirical(
      sample_initial(cfg.initial, std::max<std::size_t>(cfg.n, 1000), pool_stream));
}

}  // namespace

CommandResult cmd_simulate(const ExperimentConfig& cfg, const RunContext& ctx) {
  CommandResult result;
  const SeededStream stream(cfg.seed, 0);
  ParticleSystem start = ParticleSystem::start(sample_initial(cfg.initial, cfg.n, stream), cfg.process);
  const Dynamics dyn{cfg.params, cfg.kernel, default_drift(cfg)};
  log(ctx, "simulating " + std::to_string(cfg.n) + " particles");
  const TrajectoryRecord rec = run_trajectory(std::move(start), dyn, cfg.sim, stream, cfg.snapshots);

  std::ostringstream nd, csv, state;
  write_trajectory_ndjson(nd, rec);
  write_trajectory_csv(csv, rec);
  state << "# schema=selfex.final_state.csv version=" << io::kSchemaVersion << '\n';
  state << "# t=" << number(rec.final_state.t) << " process=" << to_string(cfg.process) << '\n';
  state << "i,b,x\n";
  for (std::size_t i = 0; i < rec.final_state.size(); ++i) {
    state << i << ',' << number(rec.final_state.b[i]) << ',' << number(rec.final_state.x[i]) << '\n';
  }
  write_file(ctx, "trajectory.ndjson", nd.str(), result);
  write_file(ctx, "trajectory.csv", csv.str(), result);
  write_file(ctx, "final_state.csv", state.str(), result);

  const auto& first = rec.points.front().summary;
  const auto& last = rec.points.back().summary;
  result.metrics["final_mean"] = last.mean;
  result.metrics["second_moment_ratio"] =
      first.second_moment > 0.0 ? rec.max_second_moment / first.second_moment : 0.0;
  write_manifest(cfg, ctx, result);
  return result;
}

CommandResult cmd_pde(const ExperimentConfig& cfg, const RunContext& ctx) {
  CommandResult result;
  log(ctx, "pde to t=" + number(cfg.pde_t_end));
  const EvolveResult run = run_pde(cfg, cfg.params, cfg.pde_t_end, cfg.record_times);
  MetricTable table(experiment_id(cfg));
  for (const auto& snap : run.snapshots) {
    std::ostringstream out;
    write_density_csv(out, snap.family, cfg.grid, cfg.params);
    write_file(ctx, "density_t" + number(snap.t) + ".csv", out.str(), result);
    density_metrics(table, snap.t, snap.family, cfg.grid);
  }
  diagnostics_metrics(table, cfg.pde_t_end, run.diagnostics, "");
  write_file(ctx, "pde_metrics.csv", table.str(), result);
  result.metrics["max_row_mass_drift"] = run.diagnostics.max_row_mass_drift;
  result.metrics["min_value"] = run.diagnostics.min_value;
  write_manifest(cfg, ctx, result);
  return result;
}

CommandResult cmd_steady(const ExperimentConfig& cfg, const RunContext& ctx) {
  CommandResult result;
  const auto kind = cfg.kernel.kind();
  if (kind == KernelKind::BoundedConfidence) {
    fail(ErrorCode::ConfigError,
         "steady: closed forms exist only for linear_difference and neighbor_value kernels");
  }
  const bool slant = kind == KernelKind::NeighborValue;
  if (slant) require_slant_stable(cfg.params);
  const double m0 = cfg.initial.mean();
  const double m = slant ? slant_mean_limit(cfg.params, m0) : m0;
  result.metrics["m"] = m;

  const InitialDistribution atoms = pde_initial(cfg);
  const InitialDistribution mapped = slant ? slant_contraction_map(cfg.params, atoms)
                                           : dirac_contraction_map(cfg.params, atoms, m);
  if (cfg.sigma_zero) {
    std::ostringstream out;
    out << grid_header("selfex.steady_atoms.csv", cfg, cfg.params, INFINITY);
    out << "# m=" << number(m) << '\n';
    out << "b,location,weight\n";
    for (std::size_t k = 0; k < mapped.atom_list().size(); ++k) {
      out << number(atoms.atom_list()[k].location) << ',' << number(mapped.atom_list()[k].location)
          << ',' << number(mapped.atom_list()[k].weight) << '\n';
    }
    write_file(ctx, "steady_atoms.csv", out.str(), result);
  } else {
    const double variance = slant ? cfg.params.sigma * cfg.params.sigma / (2.0 * cfg.params.omega)
                                  : steady_component_variance(cfg.params, cfg.steady_form);
    std::vector<std::string> names{"P_agg"};
    std::vector<std::vector<double>> cols;
    cols.push_back(slant ? steady_state_slant(cfg.params, atoms, cfg.grid)
                         : steady_state_mixture(cfg.params, atoms, m, cfg.grid, cfg.steady_form));
    for (std::size_t k = 0; k < mapped.atom_list().size(); ++k) {
      names.push_back("P_" + std::to_string(k + 1));
      cols.push_back(gaussian_on_grid(mapped.atom_list()[k].location, variance, cfg.grid));
    }
    std::string header = grid_header("selfex.steady.csv", cfg, cfg.params, INFINITY);
    header += "# m=" + number(m) + " form=" + (slant ? std::string("slant") : to_string(cfg.steady_form)) +
              " component_variance=" + number(variance) + '\n';
    write_file(ctx, "steady.csv", columns_csv(header, cfg.grid, names, cols), result);
    result.metrics["component_variance"] = variance;
  }
  write_manifest(cfg, ctx, result);
  return result;
}

CommandResult cmd_converge(const ExperimentConfig& cfg, const RunContext& ctx) {
  CommandResult result;
  if (cfg.n_list.empty()) fail(ErrorCode::ConfigError, "converge: n_list is empty");
  const double t = cfg.sim.steps() * cfg.sim.dt;
  log(ctx, "pde reference to t=" + number(t));
  const EvolveResult pde = run_pde(cfg, cfg.params, t, {});
  const auto agg = aggregate(pde.snapshots.back().family);

  const auto seeds = cfg.seeds();
  const std::size_t jobs = cfg.n_list.size() * seeds.size();
  std::vector<double> w1(jobs), ratio(jobs);
  log(ctx, "running " + std::to_string(jobs) + " particle jobs");
  parallel_for(jobs, ctx.threads, [&](std::size_t job) {
    const std::size_t n = cfg.n_list[job / seeds.size()];
    const auto run = simulate_process(ProcessKind::Interacting, cfg.params, cfg.kernel, cfg.initial,
                                      cfg.sim, n, SeededStream(seeds[job % seeds.size()], 0));
    w1[job] = wasserstein1_vs_density(EmpiricalMeasure(run.x), agg, cfg.grid);
    ratio[job] = run.initial_second_moment > 0.0 ? run.max_second_moment / run.initial_second_moment : 0.0;
  });

  MetricTable table(experiment_id(cfg));
  std::vector<double> ns, means;
  for (std::size_t in = 0; in < cfg.n_list.size(); ++in) {
    const std::size_t n = cfg.n_list[in];
    const std::span<const double> row(w1.data() + in * seeds.size(), seeds.size());
    for (std::size_t is = 0; is < seeds.size(); ++is) {
      table.add(t, n, "w1.seed." + std::to_string(seeds[is]), row[is]);
    }
    const Moments m = moments(row);
    const double k = static_cast<double>(seeds.size());
    const double se = k > 1 ? std::sqrt(m.variance / (k - 1.0)) : 0.0;
    table.add(t, n, "w1_mean", m.mean);
    table.add(t, n, "w1_se", se);
    ns.push_back(static_cast<double>(n));
    means.push_back(m.mean);
    result.metrics["w1_mean.N" + std::to_string(n)] = m.mean;
  }
  const double max_ratio = *std::max_element(ratio.begin(), ratio.end());
  table.add(t, "max_second_moment_ratio", max_ratio);
  diagnostics_metrics(table, t, pde.diagnostics, "pde.");
  result.metrics["max_second_moment_ratio"] = max_ratio;
  write_file(ctx, "converge.csv", table.str(), result);

  if (ns.size() >= 3) {
    const RateFit fit = fit_rate(ns, means);
    write_file(ctx, "rate_fit.csv", rate_fit_csv(experiment_id(cfg), fit), result);
    result.metrics["slope"] = fit.slope;
    result.metrics["r2"] = fit.r2;
    check(cfg, result, fit.slope >= -0.65 && fit.slope <= -0.35 && fit.r2 >= 0.9,
          "converge: slope " + number(fit.slope) + " r2 " + number(fit.r2) +
              " outside [-0.65, -0.35] / r2 >= 0.9");
  } else {
    std::cerr << "selfex: converge: rate fit needs at least 3 N values, skipped\n";
  }
  write_manifest(cfg, ctx, result);
  return result;
}

CommandResult cmd_coupling(const ExperimentConfig& cfg, const RunContext& ctx) {
  CommandResult result;
  if (cfg.n_list.empty()) fail(ErrorCode::ConfigError, "coupling: n_list is empty");
  const auto seeds = cfg.seeds();
  log(ctx, "coupling over " + std::to_string(cfg.n_list.size() * seeds.size()) + " jobs");
  const CouplingResult cr =
      coupling_experiment(cfg.params, cfg.kernel, cfg.initial, cfg.sim, cfg.n_list, seeds, ctx.threads);
  const double t = cfg.sim.steps() * cfg.sim.dt;

  MetricTable table(experiment_id(cfg));
  std::vector<double> ns, errs;
  bool decreasing = true;
  for (const auto& row : cr.rows) {
    for (std::size_t is = 0; is < seeds.size(); ++is) {
      table.add(t, row.n, "sup_error.seed." + std::to_string(seeds[is]), row.per_seed[is]);
    }
    table.add(t, row.n, "sup_error_mean", row.mean_sup_error);
    table.add(t, row.n, "sup_error_se", row.std_error);
    if (!errs.empty() && !(row.mean_sup_error < errs.back())) decreasing = false;
    ns.push_back(static_cast<double>(row.n));
    errs.push_back(row.mean_sup_error);
    result.metrics["sup_error.N" + std::to_string(row.n)] = row.mean_sup_error;
  }
  table.add(t, "max_second_moment_ratio", cr.max_second_moment_ratio);
  result.metrics["max_second_moment_ratio"] = cr.max_second_moment_ratio;
  result.metrics["decreasing"] = decreasing ? 1.0 : 0.0;
  write_file(ctx, "coupling.csv", table.str(), result);

  check(cfg, result, decreasing, "coupling: errors not strictly decreasing in N");
  if (ns.size() >= 3 && std::all_of(errs.begin(), errs.end(), [](double e) { return e > 0.0; })) {
    const RateFit fit = fit_rate(ns, errs);
    write_file(ctx, "rate_fit.csv", rate_fit_csv(experiment_id(cfg), fit), result);
    result.metrics["slope"] = fit.slope;
    result.metrics["r2"] = fit.r2;
    check(cfg, result, fit.slope <= -0.35, "coupling: slope " + number(fit.slope) + " > -0.35");
  } else {
    std::cerr << "selfex: coupling: rate fit needs at least 3 N values with nonzero error, skipped\n";
  }
  write_manifest(cfg, ctx, result);
  return result;
}

CommandResult cmd_figures(const ExperimentConfig& cfg, const RunContext& ctx) {
  CommandResult result;
  MetricTable table(experiment_id(cfg));
  const Grid1D& grid = cfg.grid;
  const double m0 = pde_initial(cfg).mean();

  const auto overlays = [&](const ModelParams& p) {
    return std::vector<std::vector<double>>{
        steady_state_mixture(p, cfg.initial, m0, grid, SteadyForm::FpConsistent),
        steady_state_mixture(p, cfg.initial, m0, grid, SteadyForm::SquaredRate)};
  };
  const auto half_masses = [&](const std::string& fig, double t, const std::vector<double>& agg) {
    const double left = left_mass(agg, grid);
    table.add(t, fig + ".mass_left", left);
    table.add(t, fig + ".mass_right", density_mass(agg, grid) - left);
  };
  const auto modes = [&](const std::string& fig, double t, const std::vector<double>& agg) {
    const auto cells = mode_cells(agg);
    table.add(t, fig + ".modes", static_cast<double>(cells.size()));
    for (std::size_t k = 0; k < cells.size(); ++k) {
      table.add(t, fig + ".mode_location." + std::to_string(k + 1), grid.center(cells[k]));
    }
    return cells.size();
  };

  // fig1 and fig3 share one run at the configured omega.
  double t_main = cfg.fig3_t;
  for (const double t : cfg.snapshot_times) t_main = std::max(t_main, t);
  std::vector<double> times = cfg.snapshot_times;
  times.push_back(cfg.fig3_t);
  log(ctx, "figure run to t=" + number(t_main));
  const EvolveResult main_run = run_pde(cfg, cfg.params, t_main, times);
  diagnostics_metrics(table, t_main, main_run.diagnostics, "fig1.");
  {
    std::vector<std::string> names;
    std::vector<std::vector<double>> cols;
    for (const double t : cfg.snapshot_times) {
      const auto& snap = snapshot_at(main_run, t);
      names.push_back("agg_t" + number(t));
      cols.push_back(aggregate(snap.family));
      density_metrics(table, t, snap.family, grid);
    }
    names.push_back("steady_fp");
    names.push_back("steady_literal");
    for (auto& c : overlays(cfg.params)) cols.push_back(std::move(c));
    write_file(ctx, "fig1_evolution.csv",
               columns_csv(grid_header("selfex.fig1.csv", cfg, cfg.params, t_main), grid, names, cols),
               result);
  }

  const auto family_figure = [&](const std::string& fig, const std::string& file,
                                 const ModelParams& p, const BFamilyDensity& family, double t) {
    std::vector<std::string> names{"P_agg"};
    std::vector<std::vector<double>> cols{aggregate(family)};
    for (std::size_t k = 0; k < family.atom_count(); ++k) {
      names.push_back("P_" + std::to_string(k + 1));
      cols.emplace_back(family.row(k).begin(), family.row(k).end());
    }
    names.push_back("steady_fp");
    names.push_back("steady_literal");
    for (auto& c : overlays(p)) cols.push_back(std::move(c));
    write_file(ctx, file, columns_csv(grid_header("selfex." + fig + ".csv", cfg, p, t), grid, names, cols),
               result);

    const auto& agg = cols.front();
    table.add(t, fig + ".mean", density_mean(agg, grid));
    const double asym = asymmetry(agg, grid);
    if (!std::isnan(asym)) table.add(t, fig + ".asymmetry", asym);
    half_masses(fig, t, agg);
    // Distance of each row to both closed-form steady candidates.
    for (std::size_t k = 0; k < family.atom_count(); ++k) {
      const double b = family.atoms()[k].location;
      for (const auto form : {SteadyForm::FpConsistent, SteadyForm::SquaredRate}) {
        const auto candidate = steady_state_component(p, m0, b, grid, form);
        table.add(t, fig + ".row" + std::to_string(k + 1) + ".w1_" + to_string(form),
                  wasserstein1_densities(family.row(k), candidate, grid));
      }
    }
    return modes(fig, t, agg);
  };

  const std::size_t fig3_modes = family_figure("fig3", "fig3_t200.csv", cfg.params,
                                               snapshot_at(main_run, cfg.fig3_t).family, cfg.fig3_t);
  result.metrics["fig3.modes"] = static_cast<double>(fig3_modes);

  ModelParams no_memory = cfg.params;
  no_memory.omega = 0.0;
  log(ctx, "omega = 0 run to t=" + number(cfg.fig2_t));
  const EvolveResult fig2_run = run_pde(cfg, no_memory, cfg.fig2_t, {});
  diagnostics_metrics(table, cfg.fig2_t, fig2_run.diagnostics, "fig2.");
  const auto& fig2_family = fig2_run.snapshots.back().family;
  const std::size_t fig2_modes = family_figure("fig2", "fig2_steady.csv", no_memory, fig2_family, cfg.fig2_t);
  {
    // With omega = 0 every row relaxes to the same Gaussian around the mean.
    const auto target = gaussian_on_grid(
        m0, steady_component_variance(no_memory, SteadyForm::FpConsistent), grid);
    table.add(cfg.fig2_t, "fig2.w1_gaussian", wasserstein1_densities(aggregate(fig2_family), target, grid));
  }
  result.metrics["fig2.modes"] = static_cast<double>(fig2_modes);

  write_file(ctx, "figures_metrics.csv", table.str(), result);
  check(cfg, result, fig3_modes == 2, "figures: fig3 has " + std::to_string(fig3_modes) + " modes, expected 2");
  check(cfg, result, fig2_modes == 1, "figures: fig2 has " + std::to_string(fig2_modes) + " modes, expected 1");
  write_manifest(cfg, ctx, result);
  return result;
}

CommandResult cmd_slant_mean(const ExperimentConfig& cfg, const RunContext& ctx) {
  CommandResult result;
  if (cfg.kernel.kind() != KernelKind::NeighborValue) {
    fail(ErrorCode::ConfigError, "slant-mean needs kernel.kind = neighbor_value");
  }
  const double m0 = cfg.initial.mean();
  const double T = cfg.slant_t_end;
  const std::size_t points = cfg.slant_points;
  std::vector<double> times(points);
  for (std::size_t k = 0; k < points; ++k) times[k] = T * static_cast<double>(k) / static_cast<double>(points - 1);

  // Particle runs record on the same grid, so the spacing must be a whole
  // number of steps.
  const double spacing = T / static_cast<double>(points - 1);
  const double stride_real = spacing / cfg.sim.dt;
  const auto stride = static_cast<std::size_t>(std::llround(stride_real));
  if (stride < 1 || std::fabs(stride_real - static_cast<double>(stride)) > 1e-9 * stride_real) {
    fail(ErrorCode::ConfigError, "slant-mean: time grid spacing must be a multiple of sim.dt");
  }
  SimConfig sim = cfg.sim;
  sim.t_end = T;
  sim.record_stride = stride;
  sim.validate(cfg.params);

  const auto rk4 = integrate_slant_mean_rk4(cfg.params, m0, times, cfg.slant_rk4_step);
  const auto seeds = cfg.seeds();
  std::vector<std::vector<double>> means(seeds.size());
  double max_ratio = 0.0;
  std::vector<double> ratios(seeds.size());
  log(ctx, "slant particle runs: " + std::to_string(seeds.size()));
  const Dynamics dyn{cfg.params, cfg.kernel, std::nullopt};
  parallel_for(seeds.size(), ctx.threads, [&](std::size_t s) {
    const SeededStream stream(seeds[s], 0);
    const auto rec = run_trajectory(
        ParticleSystem::start(sample_initial(cfg.initial, cfg.n, stream), ProcessKind::Interacting), dyn,
        sim, stream);
    for (const auto& p : rec.points) means[s].push_back(p.summary.mean);
    const double m2 = rec.points.front().summary.second_moment;
    ratios[s] = m2 > 0.0 ? rec.max_second_moment / m2 : 0.0;
  });
  for (const double r : ratios) max_ratio = std::max(max_ratio, r);

  std::ostringstream out;
  out << "# schema=selfex.slant_mean.csv version=" << io::kSchemaVersion << '\n';
  out << "# omega=" << number(cfg.params.omega) << " alpha=" << number(cfg.params.alpha)
      << " lambda=" << number(cfg.params.lambda) << " m0=" << number(m0) << " N=" << cfg.n
      << " replicas=" << seeds.size() << '\n';
  out << "t,closed_form,rk4,particle_mean,particle_se\n";
  double max_rk4_gap = 0.0, max_z = 0.0;
  bool in_band = true;
  const double k = static_cast<double>(seeds.size());
  for (std::size_t i = 0; i < points; ++i) {
    std::vector<double> at(seeds.size());
    for (std::size_t s = 0; s < seeds.size(); ++s) at[s] = means[s][i];
    const Moments m = moments(at);
    const double se = k > 1 ? std::sqrt(m.variance / (k - 1.0)) : 0.0;
    const double closed = slant_mean(times[i], cfg.params, m0);
    max_rk4_gap = std::max(max_rk4_gap, std::fabs(closed - rk4[i].m));
    const double gap = std::fabs(m.mean - closed);
    if (se > 0.0) max_z = std::max(max_z, gap / se);
    if (gap > 3.0 * se + 1e-12) in_band = false;
    out << number(times[i]) << ',' << number(closed) << ',' << number(rk4[i].m) << ','
        << number(m.mean) << ',' << number(se) << '\n';
  }
  write_file(ctx, "slant_mean.csv", out.str(), result);

  MetricTable table(experiment_id(cfg));
  table.add(T, "max_abs_closed_minus_rk4", max_rk4_gap);
  table.add(T, cfg.n, "max_particle_z", max_z);
  table.add(T, cfg.n, "max_second_moment_ratio", max_ratio);
  table.add(T, "closed_form_at_t_end", slant_mean(T, cfg.params, m0));
  if (cfg.params.omega > cfg.params.coupling()) {
    const double limit = slant_mean_limit(cfg.params, m0);
    const double alt = slant_mean_limit_coupling_ratio(cfg.params, m0);
    table.add(INFINITY, "limit", limit);
    table.add(INFINITY, "limit_coupling_ratio", alt);
    table.add(INFINITY, "limit_deviation", alt - limit);
    result.metrics["limit"] = limit;
    result.metrics["limit_coupling_ratio"] = alt;
  }
  write_file(ctx, "slant_metrics.csv", table.str(), result);
  result.metrics["max_abs_closed_minus_rk4"] = max_rk4_gap;
  result.metrics["max_particle_z"] = max_z;
  result.metrics["max_second_moment_ratio"] = max_ratio;
  check(cfg, result, max_rk4_gap <= 1e-6, "slant-mean: closed form vs RK4 gap " + number(max_rk4_gap));
  check(cfg, result, in_band, "slant-mean: particle mean outside 3 SE band (max z " + number(max_z) + ")");
  write_manifest(cfg, ctx, result);
  return result;
}

CommandResult run_experiment(const ExperimentConfig& cfg, const RunContext& ctx) {
  switch (cfg.experiment) {
    case Experiment::Simulate: return cmd_simulate(cfg, ctx);
    case Experiment::Pde: return cmd_pde(cfg, ctx);
    case Experiment::Steady: return cmd_steady(cfg, ctx);
    case Experiment::Converge: return cmd_converge(cfg, ctx);
    case Experiment::Coupling: return cmd_coupling(cfg, ctx);
    case Experiment::Figures: return cmd_figures(cfg, ctx);
    case Experiment::SlantMean: return cmd_slant_mean(cfg, ctx);
  }
  fail(ErrorCode::InvalidArgument, "unknown experiment");
}

}  // namespace selfex
