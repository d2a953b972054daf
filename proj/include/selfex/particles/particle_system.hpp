#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "selfex/core/kernel.hpp"
#include "selfex/core/params.hpp"

namespace selfex {

enum class ProcessKind {
  Interacting,   // X: Poisson jump interaction, sum over j != i
  Intermediate,  // Y: jumps replaced by their compensator lambda dt, sum over all j
  MckeanVlasov,  // independent copies driven by a given mean-field term
};

std::string to_string(ProcessKind kind);
ProcessKind process_kind_from_string(const std::string& name);

struct ParticleSystem {
  double t = 0.0;
  std::uint64_t step = 0;
  std::vector<double> x;
  std::vector<double> b;  // b[i] = x[i] at t = 0
  ProcessKind kind = ProcessKind::Interacting;

  static ParticleSystem start(std::vector<double> initial, ProcessKind kind);

  std::size_t size() const noexcept { return x.size(); }
};

enum class SchemeKind { EulerMaruyamaPoisson };

struct SimConfig {
  double dt = 0.1;
  double t_end = 1.0;
  std::size_t record_stride = 1;
  SchemeKind scheme = SchemeKind::EulerMaruyamaPoisson;

  // dt > 0, t_end > dt, stride >= 1 and dt * lambda <= 0.1.
  void validate(const ModelParams& params) const;
  std::uint64_t steps() const;
};

// Mean-field term for the McKean-Vlasov particles, i.e. how
// integral P(dy) h(y, x) is evaluated.
class MeanFieldDrift {
 public:
  enum class Kind { AnalyticLinear, AnalyticSlant, FrozenEmpirical };

  // Difference kernel: the law's mean is conserved, so the term is m0 - x.
  static MeanFieldDrift analytic_linear(double m0);
  // Neighbor-value kernel: the term is the closed-form mean m(t).
  static MeanFieldDrift analytic_slant(double m0);
  // Any kernel: empirical average of h over a fixed pool.
  static MeanFieldDrift frozen_empirical(std::vector<double> pool);

  Kind kind() const noexcept { return kind_; }
  double m0() const noexcept { return m0_; }
  const std::vector<double>& pool() const noexcept { return pool_; }

  // Throws IncompatibleDrift when the drift kind does not fit the kernel.
  void check_compatible(const InteractionKernel& kernel) const;

 private:
  MeanFieldDrift(Kind kind, double m0, std::vector<double> pool)
      : kind_(kind), m0_(m0), pool_(std::move(pool)) {}

  Kind kind_;
  double m0_;
  std::vector<double> pool_;
};

}  // namespace selfex
