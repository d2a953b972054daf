#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "selfex/core/seeded_stream.hpp"

namespace selfex {

struct Atom {
  double location = 0.0;
  double weight = 0.0;

  friend bool operator==(const Atom&, const Atom&) = default;
};

// Law of the initial opinion b = X(0). Only bounded-support laws are
// representable: weighted atoms or a uniform interval.
class InitialDistribution {
 public:
  enum class Kind { Atoms, Uniform };

  // Weights must be positive and sum to 1 within 1e-12.
  static InitialDistribution atoms(std::vector<Atom> atoms);
  static InitialDistribution uniform(double lo, double hi);

  Kind kind() const noexcept { return kind_; }
  const std::vector<Atom>& atom_list() const noexcept { return atoms_; }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

  double mean() const noexcept;
  double second_moment() const noexcept;
  // [min, max] of the support.
  double support_min() const noexcept;
  double support_max() const noexcept;

  friend bool operator==(const InitialDistribution&, const InitialDistribution&) = default;

 private:
  InitialDistribution() = default;

  Kind kind_ = Kind::Atoms;
  std::vector<Atom> atoms_;
  double lo_ = 0.0;
  double hi_ = 0.0;
};

// n i.i.d. draws; draw i depends only on (stream, i), so the first n draws
// are shared by every larger n.
std::vector<double> sample_initial(const InitialDistribution& dist, std::size_t n,
                                   const SeededStream& stream);

// Atom quadrature of the law. Atom inputs with at most k atoms pass through;
// a uniform law becomes k equal-weight atoms at the mid-quantiles.
InitialDistribution discretize_initial(const InitialDistribution& dist, std::size_t k);

}  // namespace selfex
