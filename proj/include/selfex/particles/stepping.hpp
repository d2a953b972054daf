#pragma once

#include <span>
#include <vector>

#include "selfex/core/kernel.hpp"
#include "selfex/core/params.hpp"
#include "selfex/core/seeded_stream.hpp"
#include "selfex/particles/particle_system.hpp"
#include "selfex/simd/kernels.hpp"

namespace selfex {

// One Euler step of each process. Draws for particle i at step n come from
// the stream's (Brownian, n, i) and (Jump, n, i) counters, so X and Y driven
// by the same stream share Brownian increments, and particle j's jump draws
// are the same whatever N is.
//
// The value-returning forms match the operation contracts; advance_* work in
// place and are what the runners use.

ParticleSystem step_interacting(ParticleSystem sys, const ModelParams& params,
                                const InteractionKernel& kernel, const SimConfig& cfg,
                                const SeededStream& stream);

ParticleSystem step_intermediate(ParticleSystem sys, const ModelParams& params,
                                 const InteractionKernel& kernel, const SimConfig& cfg,
                                 const SeededStream& stream);

ParticleSystem step_mckean_particles(ParticleSystem sys, const ModelParams& params,
                                     const InteractionKernel& kernel, const MeanFieldDrift& drift,
                                     const SimConfig& cfg, const SeededStream& stream);

// Reusable buffers so that in-place stepping does not allocate per step.
struct StepScratch {
  std::vector<double> noise;
  std::vector<double> extra;
  std::vector<double> counts;
  std::vector<std::uint32_t> jumpers;
};

struct StepOptions {
  const simd::KernelTable* kernels = nullptr;  // null: simd::active()
  // Difference and neighbor-value kernels use an O(N) aggregated jump sum by
  // default; false forces the per-jumper broadcast used for general kernels.
  bool linear_fast_path = true;
};

void advance_interacting(ParticleSystem& sys, const ModelParams& params,
                         const InteractionKernel& kernel, const SimConfig& cfg,
                         const SeededStream& stream, StepScratch& scratch,
                         const StepOptions& opts = {});

void advance_intermediate(ParticleSystem& sys, const ModelParams& params,
                          const InteractionKernel& kernel, const SimConfig& cfg,
                          const SeededStream& stream, StepScratch& scratch,
                          const StepOptions& opts = {});

void advance_mckean(ParticleSystem& sys, const ModelParams& params,
                    const InteractionKernel& kernel, const MeanFieldDrift& drift,
                    const SimConfig& cfg, const SeededStream& stream, StepScratch& scratch,
                    const StepOptions& opts = {});

// Mean-field term alpha*lambda * integral P(dy) h(y, x) at the given x values
// and time, as used by advance_mckean.
std::vector<double> mean_field_term(const ModelParams& params, const InteractionKernel& kernel,
                                    const MeanFieldDrift& drift, double t,
                                    std::span<const double> x);

}  // namespace selfex
