#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "selfex/core/initial_distribution.hpp"
#include "selfex/core/kernel.hpp"
#include "selfex/core/params.hpp"
#include "selfex/particles/particle_system.hpp"
#include "selfex/pde/fokker_planck.hpp"
#include "selfex/pde/grid.hpp"
#include "selfex/pde/steady_state.hpp"

namespace selfex {

inline constexpr const char* kArtifactVersion = "0.3.0";

enum class Experiment { Simulate, Pde, Steady, Converge, Coupling, Figures, SlantMean };

std::string to_string(Experiment e);
Experiment experiment_from_string(const std::string& name);

// Fully resolved experiment description. Defaults reproduce the two-atom
// setup of the density figures (sigma = 0.02, alpha = 0.02, omega = 0.01,
// atoms at -10 and 10 with weight 1/2).
struct ExperimentConfig {
  Experiment experiment = Experiment::Figures;
  std::string id;  // defaults to the experiment name

  ModelParams params{0.01, 0.02, 0.02, 1.0};
  InteractionKernel kernel = InteractionKernel::linear_difference();
  InitialDistribution initial = InitialDistribution::atoms({{-10.0, 0.5}, {10.0, 0.5}});
  std::size_t initial_quadrature = 64;  // atoms used for a uniform law on the PDE side

  Grid1D grid;
  PdeConfig pde;
  double pde_t_end = 200.0;
  std::vector<double> record_times;  // empty: only pde_t_end

  SimConfig sim{0.05, 20.0, 20};
  std::size_t n = 1000;
  ProcessKind process = ProcessKind::Interacting;
  bool snapshots = false;

  std::vector<std::size_t> n_list{250, 1000, 4000, 16000};
  std::uint64_t seed = 1;
  std::size_t replicas = 10;

  SteadyForm steady_form = SteadyForm::FpConsistent;
  bool sigma_zero = false;

  std::vector<double> snapshot_times{0.0, 25.0, 50.0, 100.0, 200.0};
  double fig2_t = 500.0;
  double fig3_t = 200.0;

  double slant_t_end = 100.0;
  std::size_t slant_points = 101;
  double slant_rk4_step = 0.01;

  // Evaluate the experiment's pass/fail thresholds and exit 4 on failure.
  bool check = false;

  // Seeds seed, seed + 1, ..., seed + replicas - 1.
  std::vector<std::uint64_t> seeds() const;

  // Flat key -> value object holding every setting (defaults included).
  nlohmann::json to_json() const;
};

// Flat dotted keys ("params.sigma", "grid.nx", ...). Unknown keys, wrong
// types and invalid values raise ConfigError before any computation.
// The manifest-only keys artifact_version and outputs are accepted and
// ignored, so a manifest is itself a valid config.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

// Resolved config plus artifact version; `outputs` lists the files written.
nlohmann::json make_manifest(const ExperimentConfig& cfg, const std::vector<std::string>& outputs);

}  // namespace selfex
