#include "selfex/particles/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "selfex/analysis/metrics.hpp"
#include "selfex/core/error.hpp"
#include "selfex/core/parallel.hpp"
#include "selfex/particles/stepping.hpp"

namespace selfex {

namespace {

double mean_square(const std::vector<double>& x) {
  double s = 0.0;
  for (const double v : x) s += v * v;
  return s / static_cast<double>(x.size());
}

}  // namespace

EnsembleRun simulate_process(ProcessKind kind, const ModelParams& params,
                             const InteractionKernel& kernel, const InitialDistribution& dist,
                             const SimConfig& cfg, std::size_t n, const SeededStream& stream,
                             const std::optional<MeanFieldDrift>& drift) {
  params.validate();
  cfg.validate(params);
  if (kind == ProcessKind::MckeanVlasov) {
    require(drift.has_value(), "McKean-Vlasov run needs a mean-field drift");
  }
  ParticleSystem sys = ParticleSystem::start(sample_initial(dist, n, stream), kind);
  EnsembleRun run;
  run.initial_second_moment = mean_square(sys.x);
  run.max_second_moment = run.initial_second_moment;
  StepScratch scratch;
  const std::uint64_t total = cfg.steps();
  while (sys.step < total) {
    switch (kind) {
      case ProcessKind::Interacting:
        advance_interacting(sys, params, kernel, cfg, stream, scratch);
        break;
      case ProcessKind::Intermediate:
        advance_intermediate(sys, params, kernel, cfg, stream, scratch);
        break;
      case ProcessKind::MckeanVlasov:
        advance_mckean(sys, params, kernel, *drift, cfg, stream, scratch);
        break;
    }
    run.max_second_moment = std::max(run.max_second_moment, mean_square(sys.x));
  }
  run.x = std::move(sys.x);
  run.b = std::move(sys.b);
  return run;
}

PicardResult picard_pool_iterate(const ModelParams& params, const InteractionKernel& kernel,
                                 const InitialDistribution& dist, const SimConfig& cfg,
                                 std::size_t pool_size, std::size_t iterations,
                                 const SeededStream& stream, std::optional<double> tol_w1) {
  params.validate();
  cfg.validate(params);
  require(iterations >= 1, "picard iteration needs iterations >= 1");
  require(pool_size >= 1000, "picard iteration needs pool size >= 1000");

  PicardResult result;
  const double width = dist.support_max() - dist.support_min();
  result.tolerance = tol_w1.value_or(1e-3 * std::max(width, 1.0));

  const std::vector<double> initial = sample_initial(dist, pool_size, stream);
  const std::uint64_t total = cfg.steps();

  // history[n] = pool at step n of the previous round; round 0 is frozen.
  std::vector<std::vector<double>> previous(1, initial);
  std::vector<std::vector<double>> current;
  std::vector<std::vector<double>> terminals;  // terminal pool of each round
  StepScratch scratch;

  for (std::size_t round = 1; round <= iterations; ++round) {
    ParticleSystem sys = ParticleSystem::start(initial, ProcessKind::MckeanVlasov);
    current.assign(1, initial);
    current.reserve(total + 1);
    while (sys.step < total) {
      const auto& pool = previous[std::min<std::size_t>(sys.step, previous.size() - 1)];
      const MeanFieldDrift drift = MeanFieldDrift::frozen_empirical(pool);
      advance_mckean(sys, params, kernel, drift, cfg, stream, scratch);
      current.push_back(sys.x);
    }
    result.rounds = round;
    terminals.push_back(current.back());

    if (params.coupling() == 0.0) {
      // The mean-field term vanishes, so every later round repeats this one.
      result.round_distances.push_back(0.0);
      result.converged = true;
      result.pool = current.back();
      return result;
    }
    if (round >= 2) {
      const double d = wasserstein1(EmpiricalMeasure(current.back()), EmpiricalMeasure(previous.back()));
      result.round_distances.push_back(d);
      if (d < result.tolerance) {
        result.converged = true;
        result.pool = current.back();
        return result;
      }
    }
    previous.swap(current);
  }
  // No convergence: hand back the pool that ended the closest pair of rounds.
  if (result.round_distances.empty()) {
    result.pool = terminals.back();
  } else {
    const auto best = std::min_element(result.round_distances.begin(), result.round_distances.end());
    result.pool = terminals[static_cast<std::size_t>(best - result.round_distances.begin()) + 1];
  }
  return result;
}

double coupling_sup_error(const ModelParams& params, const InteractionKernel& kernel,
                          const InitialDistribution& dist, const SimConfig& cfg, std::size_t n,
                          const SeededStream& stream, double* max_moment_ratio) {
  std::vector<double> b = sample_initial(dist, n, stream);
  ParticleSystem x = ParticleSystem::start(b, ProcessKind::Interacting);
  ParticleSystem y = ParticleSystem::start(std::move(b), ProcessKind::Intermediate);
  std::vector<double> sup(n, 0.0);
  StepScratch sx, sy;
  const double m2_0 = mean_square(x.x);
  double m2_max = m2_0;
  const std::uint64_t total = cfg.steps();
  while (x.step < total) {
    advance_interacting(x, params, kernel, cfg, stream, sx);
    advance_intermediate(y, params, kernel, cfg, stream, sy);
    for (std::size_t i = 0; i < n; ++i) sup[i] = std::max(sup[i], std::fabs(x.x[i] - y.x[i]));
    m2_max = std::max({m2_max, mean_square(x.x), mean_square(y.x)});
  }
  if (max_moment_ratio != nullptr) *max_moment_ratio = m2_0 > 0.0 ? m2_max / m2_0 : 0.0;
  return pairwise_sum(sup) / static_cast<double>(n);
}

CouplingResult coupling_experiment(const ModelParams& params, const InteractionKernel& kernel,
                                   const InitialDistribution& dist, const SimConfig& cfg,
                                   const std::vector<std::size_t>& n_list,
                                   const std::vector<std::uint64_t>& seeds, unsigned threads) {
  params.validate();
  cfg.validate(params);
  require(!n_list.empty() && !seeds.empty(), "coupling experiment needs N values and seeds");
  require(std::is_sorted(n_list.begin(), n_list.end()), "coupling N list must be ascending");

  const std::size_t jobs = n_list.size() * seeds.size();
  std::vector<double> errors(jobs, 0.0);
  std::vector<double> ratios(jobs, 0.0);
  parallel_for(jobs, threads, [&](std::size_t job) {
    const std::size_t in = job / seeds.size();
    const std::size_t is = job % seeds.size();
    errors[job] = coupling_sup_error(params, kernel, dist, cfg, n_list[in],
                                     SeededStream(seeds[is], 0), &ratios[job]);
  });

  CouplingResult result;
  for (std::size_t in = 0; in < n_list.size(); ++in) {
    CouplingRow row;
    row.n = n_list[in];
    row.per_seed.assign(errors.begin() + static_cast<std::ptrdiff_t>(in * seeds.size()),
                        errors.begin() + static_cast<std::ptrdiff_t>((in + 1) * seeds.size()));
    const Moments m = moments(row.per_seed);
    row.mean_sup_error = m.mean;
    const double k = static_cast<double>(row.per_seed.size());
    row.std_error = k > 1 ? std::sqrt(m.variance * k / (k - 1.0) / k) : 0.0;
    result.rows.push_back(std::move(row));
  }
  result.max_second_moment_ratio = *std::max_element(ratios.begin(), ratios.end());
  return result;
}

}  // namespace selfex
