#include "selfex/particles/stepping.hpp"

#include <cmath>

#include "selfex/core/error.hpp"
#include "selfex/pde/slant.hpp"

namespace selfex {

namespace {

const simd::KernelTable& kernels_of(const StepOptions& opts) {
  return opts.kernels != nullptr ? *opts.kernels : simd::active();
}

bool is_linear(KernelKind kind) {
  return kind == KernelKind::LinearDifference || kind == KernelKind::NeighborValue;
}

double self_coefficient(KernelKind kind) {
  return kind == KernelKind::LinearDifference ? 1.0 : 0.0;
}

void fill_noise(const ParticleSystem& sys, const ModelParams& params,
                const SeededStream& stream, std::vector<double>& noise) {
  if (params.sigma == 0.0) {
    noise.clear();
    return;
  }
  noise.resize(sys.size());
  for (std::size_t i = 0; i < sys.size(); ++i) {
    noise[i] = stream.normal(DrawKind::Brownian, sys.step, static_cast<std::uint32_t>(i));
  }
}

// Poisson(mean) by inversion; p0 = exp(-mean) is hoisted by the caller.
std::uint32_t poisson_count(double u, double mean, double p0) {
  if (u <= p0) return 0;
  double p = p0;
  double cdf = p0;
  std::uint32_t k = 0;
  while (u > cdf && k < 10000u) {
    ++k;
    p *= mean / k;
    cdf += p;
    if (p == 0.0) break;
  }
  return k;
}

void finish_step(ParticleSystem& sys, const SimConfig& cfg) {
  for (std::size_t i = 0; i < sys.size(); ++i) {
    if (!std::isfinite(sys.x[i])) {
      throw NonFiniteState(sys.step, "NonFiniteState: particle " + std::to_string(i) +
                                         " at step " + std::to_string(sys.step));
    }
  }
  ++sys.step;
  sys.t = static_cast<double>(sys.step) * cfg.dt;
}

void check_kind(const ParticleSystem& sys, ProcessKind expected) {
  require(sys.kind == expected, "particle system is a " + to_string(sys.kind) +
                                    " process, expected " + to_string(expected));
  require(!sys.x.empty() && sys.x.size() == sys.b.size(), "particle system is empty or ragged");
}

}  // namespace

void advance_interacting(ParticleSystem& sys, const ModelParams& params,
                         const InteractionKernel& kernel, const SimConfig& cfg,
                         const SeededStream& stream, StepScratch& scratch,
                         const StepOptions& opts) {
  check_kind(sys, ProcessKind::Interacting);
  const auto& k = kernels_of(opts);
  const std::size_t n = sys.size();
  fill_noise(sys, params, stream, scratch.noise);

  const double mean_jumps = params.lambda * cfg.dt;
  const double p0 = std::exp(-mean_jumps);
  scratch.counts.assign(n, 0.0);
  scratch.jumpers.clear();
  for (std::size_t j = 0; j < n; ++j) {
    const auto id = static_cast<std::uint32_t>(j);
    const std::uint32_t c = poisson_count(stream.uniform(DrawKind::Jump, sys.step, id), mean_jumps, p0);
    if (c > 0) {
      scratch.counts[j] = static_cast<double>(c);
      scratch.jumpers.push_back(id);
    }
  }

  // Jump sizes use pre-step positions; the update is applied after.
  const double scale = params.alpha / static_cast<double>(n);
  scratch.extra.assign(n, 0.0);
  if (opts.linear_fast_path && is_linear(kernel.kind())) {
    double s1 = 0.0;
    double s0 = 0.0;
    for (const auto j : scratch.jumpers) {
      s1 += scratch.counts[j] * sys.x[j];
      s0 += scratch.counts[j];
    }
    if (!scratch.jumpers.empty()) {
      k.linear_jump(scratch.extra, sys.x, scratch.counts, s1, s0, scale,
                    self_coefficient(kernel.kind()));
    }
  } else {
    const auto shape = simd::KernelShape::of(kernel);
    for (const auto j : scratch.jumpers) {
      k.broadcast_jump(scratch.extra, sys.x, sys.x[j], scratch.counts[j] * scale, j, shape);
    }
  }

  const simd::EulerCoeffs c{cfg.dt, params.omega, 0.0, 0.0, params.sigma * std::sqrt(cfg.dt)};
  k.euler_update(sys.x, sys.b, scratch.noise, scratch.extra, c);
  finish_step(sys, cfg);
}

void advance_intermediate(ParticleSystem& sys, const ModelParams& params,
                          const InteractionKernel& kernel, const SimConfig& cfg,
                          const SeededStream& stream, StepScratch& scratch,
                          const StepOptions& opts) {
  check_kind(sys, ProcessKind::Intermediate);
  const auto& k = kernels_of(opts);
  const std::size_t n = sys.size();
  fill_noise(sys, params, stream, scratch.noise);

  const double rate = params.coupling();
  simd::EulerCoeffs c{cfg.dt, params.omega, 0.0, 0.0, params.sigma * std::sqrt(cfg.dt)};
  if (opts.linear_fast_path && is_linear(kernel.kind())) {
    // (1/N) sum_j h(y_j, y_i) over all j, including j = i.
    double sum = 0.0;
    for (const double y : sys.x) sum += y;
    const double mean = sum / static_cast<double>(n);
    c.drift0 = rate * mean;
    c.drift1 = -rate * self_coefficient(kernel.kind());
    k.euler_update(sys.x, sys.b, scratch.noise, {}, c);
  } else {
    scratch.extra.resize(n);
    k.pair_sum(scratch.extra, sys.x, sys.x, {}, cfg.dt * rate / static_cast<double>(n),
               simd::KernelShape::of(kernel));
    k.euler_update(sys.x, sys.b, scratch.noise, scratch.extra, c);
  }
  finish_step(sys, cfg);
}

std::vector<double> mean_field_term(const ModelParams& params, const InteractionKernel& kernel,
                                    const MeanFieldDrift& drift, double t,
                                    std::span<const double> x) {
  drift.check_compatible(kernel);
  const double rate = params.coupling();
  std::vector<double> out(x.size());
  switch (drift.kind()) {
    case MeanFieldDrift::Kind::AnalyticLinear:
      for (std::size_t i = 0; i < x.size(); ++i) out[i] = rate * (drift.m0() - x[i]);
      break;
    case MeanFieldDrift::Kind::AnalyticSlant: {
      const double m = slant_mean(t, params, drift.m0());
      for (auto& v : out) v = rate * m;
      break;
    }
    case MeanFieldDrift::Kind::FrozenEmpirical: {
      const auto& pool = drift.pool();
      simd::active().pair_sum(out, x, pool, {}, rate / static_cast<double>(pool.size()),
                              simd::KernelShape::of(kernel));
      break;
    }
  }
  return out;
}

void advance_mckean(ParticleSystem& sys, const ModelParams& params,
                    const InteractionKernel& kernel, const MeanFieldDrift& drift,
                    const SimConfig& cfg, const SeededStream& stream, StepScratch& scratch,
                    const StepOptions& opts) {
  check_kind(sys, ProcessKind::MckeanVlasov);
  drift.check_compatible(kernel);
  const auto& k = kernels_of(opts);
  const std::size_t n = sys.size();
  fill_noise(sys, params, stream, scratch.noise);

  const double rate = params.coupling();
  simd::EulerCoeffs c{cfg.dt, params.omega, 0.0, 0.0, params.sigma * std::sqrt(cfg.dt)};
  std::span<const double> extra;
  switch (drift.kind()) {
    case MeanFieldDrift::Kind::AnalyticLinear:
      c.drift0 = rate * drift.m0();
      c.drift1 = -rate;
      break;
    case MeanFieldDrift::Kind::AnalyticSlant:
      c.drift0 = rate * slant_mean(sys.t, params, drift.m0());
      break;
    case MeanFieldDrift::Kind::FrozenEmpirical: {
      const auto& pool = drift.pool();
      if (opts.linear_fast_path && is_linear(kernel.kind())) {
        double sum = 0.0;
        for (const double y : pool) sum += y;
        c.drift0 = rate * (sum / static_cast<double>(pool.size()));
        c.drift1 = -rate * self_coefficient(kernel.kind());
      } else {
        scratch.extra.resize(n);
        k.pair_sum(scratch.extra, sys.x, pool, {}, cfg.dt * rate / static_cast<double>(pool.size()),
                   simd::KernelShape::of(kernel));
        extra = scratch.extra;
      }
      break;
    }
  }
  k.euler_update(sys.x, sys.b, scratch.noise, extra, c);
  finish_step(sys, cfg);
}

ParticleSystem step_interacting(ParticleSystem sys, const ModelParams& params,
                                const InteractionKernel& kernel, const SimConfig& cfg,
                                const SeededStream& stream) {
  StepScratch scratch;
  advance_interacting(sys, params, kernel, cfg, stream, scratch);
  return sys;
}

ParticleSystem step_intermediate(ParticleSystem sys, const ModelParams& params,
                                 const InteractionKernel& kernel, const SimConfig& cfg,
                                 const SeededStream& stream) {
  StepScratch scratch;
  advance_intermediate(sys, params, kernel, cfg, stream, scratch);
  return sys;
}

ParticleSystem step_mckean_particles(ParticleSystem sys, const ModelParams& params,
                                     const InteractionKernel& kernel, const MeanFieldDrift& drift,
                                     const SimConfig& cfg, const SeededStream& stream) {
  StepScratch scratch;
  advance_mckean(sys, params, kernel, drift, cfg, stream, scratch);
  return sys;
}

}  // namespace selfex
