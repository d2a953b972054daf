#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "selfex/core/initial_distribution.hpp"
#include "selfex/core/kernel.hpp"
#include "selfex/core/params.hpp"
#include "selfex/core/seeded_stream.hpp"
#include "selfex/particles/particle_system.hpp"

namespace selfex {

struct SnapshotSummary {
  double mean = 0.0;
  double second_moment = 0.0;
  double variance = 0.0;
  double min = 0.0;
  double max = 0.0;
};

SnapshotSummary summarize(const std::vector<double>& x);

struct TrajectoryPoint {
  double t = 0.0;
  std::uint64_t step = 0;
  SnapshotSummary summary;
  std::vector<double> snapshot;  // empty unless snapshots were requested
};

struct TrajectoryRecord {
  std::vector<TrajectoryPoint> points;
  ParticleSystem final_state;
  // Largest (1/N) sum x_i^2 over every step, not only recorded ones.
  double max_second_moment = 0.0;
};

struct Dynamics {
  ModelParams params;
  InteractionKernel kernel = InteractionKernel::linear_difference();
  std::optional<MeanFieldDrift> drift;  // required for McKean-Vlasov systems
};

// Steps the system (any process kind) from its current state to cfg.t_end,
// recording at step 0, every record_stride steps, and the final step.
// NonFiniteState propagates with the failing step index.
TrajectoryRecord run_trajectory(ParticleSystem initial, const Dynamics& dyn,
                                const SimConfig& cfg, const SeededStream& stream,
                                bool snapshots = false);

// NDJSON: a schema header line, then one object per record.
void write_trajectory_ndjson(std::ostream& out, const TrajectoryRecord& rec);
// CSV of the summary statistics, preceded by a schema comment line.
void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& rec);

}  // namespace selfex
