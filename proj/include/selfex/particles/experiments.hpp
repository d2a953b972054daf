#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "selfex/core/initial_distribution.hpp"
#include "selfex/core/kernel.hpp"
#include "selfex/core/params.hpp"
#include "selfex/core/seeded_stream.hpp"
#include "selfex/particles/particle_system.hpp"

namespace selfex {

// Terminal state of one particle run plus its second-moment envelope.
struct EnsembleRun {
  std::vector<double> x;
  std::vector<double> b;
  double initial_second_moment = 0.0;
  double max_second_moment = 0.0;
};

// N particles with b_i ~ dist drawn from `stream`, stepped to cfg.t_end.
EnsembleRun simulate_process(ProcessKind kind, const ModelParams& params,
                             const InteractionKernel& kernel, const InitialDistribution& dist,
                             const SimConfig& cfg, std::size_t n, const SeededStream& stream,
                             const std::optional<MeanFieldDrift>& drift = std::nullopt);

struct PicardResult {
  std::vector<double> pool;              // terminal pool of the returned round
  std::vector<double> round_distances;   // W1 between successive terminal pools
  std::size_t rounds = 0;
  bool converged = false;                // false is the NoConvergence warning
  double tolerance = 0.0;
};

// Self-consistent McKean-Vlasov law by fixed-point iteration on a particle
// pool. Round 0 is the initial sample held fixed in time; round r simulates
// pool_size independent particles whose mean-field term at step n is the
// empirical average over round r-1's pool at step n. All rounds reuse the same
// draws. Stops early once successive terminal pools are within `tol_w1`
// (default 1e-3 times the width of the initial support, at least 1e-3).
PicardResult picard_pool_iterate(const ModelParams& params, const InteractionKernel& kernel,
                                 const InitialDistribution& dist, const SimConfig& cfg,
                                 std::size_t pool_size, std::size_t iterations,
                                 const SeededStream& stream,
                                 std::optional<double> tol_w1 = std::nullopt);

struct CouplingRow {
  std::size_t n = 0;
  double mean_sup_error = 0.0;  // average over seeds
  double std_error = 0.0;       // standard error over seeds
  std::vector<double> per_seed;
};

struct CouplingResult {
  std::vector<CouplingRow> rows;  // ascending N
  // max over runs and steps of (1/N) sum x^2 divided by its t = 0 value
  double max_second_moment_ratio = 0.0;
};

// Couples the interacting system X with the intermediate system Y: same
// initial opinions, same Brownian increments; only X sees Poisson jumps. For
// each N estimates (1/N) sum_i E[sup_t |X_i - Y_i|] over the seeds, with the
// supremum taken over every step.
CouplingResult coupling_experiment(const ModelParams& params, const InteractionKernel& kernel,
                                   const InitialDistribution& dist, const SimConfig& cfg,
                                   const std::vector<std::size_t>& n_list,
                                   const std::vector<std::uint64_t>& seeds, unsigned threads = 1);

// Per-seed mean sup error for a single (N, seed) pair.
double coupling_sup_error(const ModelParams& params, const InteractionKernel& kernel,
                          const InitialDistribution& dist, const SimConfig& cfg, std::size_t n,
                          const SeededStream& stream, double* max_moment_ratio = nullptr);

}  // namespace selfex
