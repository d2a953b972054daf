#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace selfex {

struct Grid1D;

// Uniformly weighted sample, kept sorted ascending.
class EmpiricalMeasure {
 public:
  explicit EmpiricalMeasure(std::vector<double> samples);
  EmpiricalMeasure(std::span<const double> samples)
      : EmpiricalMeasure(std::vector<double>(samples.begin(), samples.end())) {}

  std::span<const double> samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }

 private:
  std::vector<double> samples_;
};

// Exact W1 through the 1D quantile identity: the mean absolute difference of
// order statistics for equal sizes, and the integral of |F_a - F_b| over the
// merged breakpoints otherwise.
double wasserstein1(const EmpiricalMeasure& a, const EmpiricalMeasure& b);

// Integral of |F_emp - F_density| where the density is piecewise constant on
// the grid cells (so its CDF is piecewise linear). Exact for that reading of
// the density, O(dx) against the underlying continuous law.
double wasserstein1_vs_density(const EmpiricalMeasure& a, std::span<const double> density,
                               const Grid1D& grid);

// W1 between two cellwise-constant densities on the same grid.
double wasserstein1_densities(std::span<const double> p, std::span<const double> q,
                              const Grid1D& grid);

// Reproducible sum: fixed pairwise association independent of threading.
double pairwise_sum(std::span<const double> values);

struct Moments {
  double mean = 0.0;
  double second_moment = 0.0;
  double variance = 0.0;
};

Moments moments(std::span<const double> samples);
inline Moments moments(const EmpiricalMeasure& a) { return moments(a.samples()); }

// Least-squares line through (log N, log err).
struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// Throws DegenerateInput on fewer than 3 points or any err <= 0.
RateFit fit_rate(std::span<const double> ns, std::span<const double> errs);

// Density estimate on the grid cells (counts / (n dx)); samples outside the
// grid are dropped and reported through `outside`.
std::vector<double> histogram(std::span<const double> samples, const Grid1D& grid,
                              std::size_t* outside = nullptr);

}  // namespace selfex
