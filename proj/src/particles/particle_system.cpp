#include "selfex/particles/particle_system.hpp"

#include <cmath>

#include "selfex/core/error.hpp"

namespace selfex {

std::string to_string(ProcessKind kind) {
  switch (kind) {
    case ProcessKind::Interacting: return "interacting";
    case ProcessKind::Intermediate: return "intermediate";
    case ProcessKind::MckeanVlasov: return "mckean_vlasov";
  }
  return "unknown";
}

ProcessKind process_kind_from_string(const std::string& name) {
  if (name == "interacting") return ProcessKind::Interacting;
  if (name == "intermediate") return ProcessKind::Intermediate;
  if (name == "mckean_vlasov") return ProcessKind::MckeanVlasov;
  fail(ErrorCode::InvalidArgument, "unknown process '" + name + "'");
}

ParticleSystem ParticleSystem::start(std::vector<double> initial, ProcessKind kind) {
  require(!initial.empty(), "particle system needs N >= 1");
  for (const double v : initial) require(std::isfinite(v), "initial opinions must be finite");
  ParticleSystem sys;
  sys.kind = kind;
  sys.x = initial;
  sys.b = std::move(initial);
  return sys;
}

void SimConfig::validate(const ModelParams& params) const {
  require(std::isfinite(dt) && dt > 0.0, "sim dt must be > 0");
  require(std::isfinite(t_end) && t_end > dt, "sim t_end must exceed dt");
  require(record_stride >= 1, "record stride must be >= 1");
  require(dt * params.lambda <= 0.1 + 1e-12, "dt * lambda must be <= 0.1");
}

std::uint64_t SimConfig::steps() const {
  return static_cast<std::uint64_t>(std::llround(std::ceil(t_end / dt - 1e-9)));
}

MeanFieldDrift MeanFieldDrift::analytic_linear(double m0) {
  require(std::isfinite(m0), "m0 must be finite");
  return {Kind::AnalyticLinear, m0, {}};
}

MeanFieldDrift MeanFieldDrift::analytic_slant(double m0) {
  require(std::isfinite(m0), "m0 must be finite");
  return {Kind::AnalyticSlant, m0, {}};
}

MeanFieldDrift MeanFieldDrift::frozen_empirical(std::vector<double> pool) {
  require(!pool.empty(), "frozen empirical drift needs a nonempty pool");
  return {Kind::FrozenEmpirical, 0.0, std::move(pool)};
}

void MeanFieldDrift::check_compatible(const InteractionKernel& kernel) const {
  if (kind_ == Kind::AnalyticLinear && kernel.kind() != KernelKind::LinearDifference) {
    fail(ErrorCode::IncompatibleDrift, "analytic linear drift needs the linear difference kernel");
  }
  if (kind_ == Kind::AnalyticSlant && kernel.kind() != KernelKind::NeighborValue) {
    fail(ErrorCode::IncompatibleDrift, "analytic slant drift needs the neighbor value kernel");
  }
}

}  // namespace selfex
