#include "selfex/analysis/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "selfex/core/error.hpp"
#include "selfex/pde/grid.hpp"

namespace selfex {

namespace {

// Integral over a segment of length len of |d(x)| where d is linear from d0
// to d1.
double abs_linear_integral(double d0, double d1, double len) {
  if ((d0 >= 0.0 && d1 >= 0.0) || (d0 <= 0.0 && d1 <= 0.0)) {
    return len * std::fabs(0.5 * (d0 + d1));
  }
  return len * (d0 * d0 + d1 * d1) / (2.0 * (std::fabs(d0) + std::fabs(d1)));
}

std::vector<double> face_cdf(std::span<const double> density, double dx) {
  std::vector<double> cdf(density.size() + 1, 0.0);
  for (std::size_t i = 0; i < density.size(); ++i) cdf[i + 1] = cdf[i] + density[i] * dx;
  return cdf;
}

void require_normalized(std::span<const double> density, const Grid1D& grid) {
  double mass = 0.0;
  for (const double p : density) mass += p;
  mass *= grid.dx();
  require(std::fabs(mass - 1.0) <= 1e-6, "density must integrate to 1");
}

}  // namespace

EmpiricalMeasure::EmpiricalMeasure(std::vector<double> samples) : samples_(std::move(samples)) {
  require(!samples_.empty(), "empirical measure needs at least one sample");
  std::sort(samples_.begin(), samples_.end());
}

double pairwise_sum(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n <= 8) {
    double s = 0.0;
    for (const double v : values) s += v;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double wasserstein1(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
  const auto xa = a.samples();
  const auto xb = b.samples();
  const std::size_t n = xa.size();
  const std::size_t m = xb.size();
  if (n == m) {
    std::vector<double> diff(n);
    for (std::size_t i = 0; i < n; ++i) diff[i] = std::fabs(xa[i] - xb[i]);
    return pairwise_sum(diff) / static_cast<double>(n);
  }
  double total = 0.0;
  std::size_t i = 0, j = 0;
  double prev = std::min(xa[0], xb[0]);
  while (i < n || j < m) {
    const double next = (j == m || (i < n && xa[i] <= xb[j])) ? xa[i] : xb[j];
    const double fa = static_cast<double>(i) / static_cast<double>(n);
    const double fb = static_cast<double>(j) / static_cast<double>(m);
    total += std::fabs(fa - fb) * (next - prev);
    while (i < n && xa[i] == next) ++i;
    while (j < m && xb[j] == next) ++j;
    prev = next;
  }
  return total;
}

double wasserstein1_vs_density(const EmpiricalMeasure& a, std::span<const double> density,
                               const Grid1D& grid) {
  require(density.size() == grid.nx, "density size must match the grid");
  require_normalized(density, grid);
  const double dx = grid.dx();
  const auto cdf = face_cdf(density, dx);
  const auto cdf_at = [&](double x) {
    if (x <= grid.x_min) return 0.0;
    if (x >= grid.x_max) return cdf.back();
    auto cell = static_cast<std::size_t>((x - grid.x_min) / dx);
    cell = std::min(cell, grid.nx - 1);
    return cdf[cell] + density[cell] * (x - grid.face(cell));
  };

  const auto xs = a.samples();
  std::vector<double> points;
  points.reserve(grid.nx + 1 + xs.size());
  for (std::size_t f = 0; f <= grid.nx; ++f) points.push_back(grid.face(f));
  points.insert(points.end(), xs.begin(), xs.end());
  std::sort(points.begin(), points.end());

  const double n = static_cast<double>(xs.size());
  std::size_t below = 0;
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < points.size(); ++k) {
    const double x0 = points[k];
    const double x1 = points[k + 1];
    while (below < xs.size() && xs[below] <= x0) ++below;
    if (x1 <= x0) continue;
    const double fe = static_cast<double>(below) / n;
    total += abs_linear_integral(cdf_at(x0) - fe, cdf_at(x1) - fe, x1 - x0);
  }
  return total;
}

double wasserstein1_densities(std::span<const double> p, std::span<const double> q,
                              const Grid1D& grid) {
  require(p.size() == grid.nx && q.size() == grid.nx, "density size must match the grid");
  const double dx = grid.dx();
  double fp = 0.0, fq = 0.0, total = 0.0;
  for (std::size_t i = 0; i < grid.nx; ++i) {
    const double d0 = fp - fq;
    fp += p[i] * dx;
    fq += q[i] * dx;
    total += abs_linear_integral(d0, fp - fq, dx);
  }
  return total;
}

Moments moments(std::span<const double> samples) {
  require(!samples.empty(), "moments need at least one sample");
  const double n = static_cast<double>(samples.size());
  std::vector<double> sq(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) sq[i] = samples[i] * samples[i];
  Moments m;
  m.mean = pairwise_sum(samples) / n;
  m.second_moment = pairwise_sum(sq) / n;
  // Centered pass for the variance; avoids cancellation in E[x^2] - E[x]^2.
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double d = samples[i] - m.mean;
    sq[i] = d * d;
  }
  m.variance = pairwise_sum(sq) / n;
  return m;
}

RateFit fit_rate(std::span<const double> ns, std::span<const double> errs) {
  if (ns.size() != errs.size()) fail(ErrorCode::DegenerateInput, "ns and errs differ in length");
  if (ns.size() < 3) fail(ErrorCode::DegenerateInput, "rate fit needs at least 3 points");
  const std::size_t k = ns.size();
  std::vector<double> lx(k), ly(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (!(errs[i] > 0.0) || !std::isfinite(errs[i])) {
      fail(ErrorCode::DegenerateInput, "rate fit needs errors > 0");
    }
    if (!(ns[i] > 0.0)) fail(ErrorCode::DegenerateInput, "rate fit needs N > 0");
    lx[i] = std::log(ns[i]);
    ly[i] = std::log(errs[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(k);
  my /= static_cast<double>(k);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) fail(ErrorCode::DegenerateInput, "rate fit needs distinct N");
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy == 0.0) {
    fit.r2 = 1.0;
  } else {
    double ss_res = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
      ss_res += r * r;
    }
    fit.r2 = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  }
  return fit;
}

std::vector<double> histogram(std::span<const double> samples, const Grid1D& grid,
                              std::size_t* outside) {
  std::vector<double> density(grid.nx, 0.0);
  const double dx = grid.dx();
  std::size_t dropped = 0;
  for (const double x : samples) {
    if (!(x >= grid.x_min && x < grid.x_max)) {
      ++dropped;
      continue;
    }
    auto cell = static_cast<std::size_t>((x - grid.x_min) / dx);
    density[std::min(cell, grid.nx - 1)] += 1.0;
  }
  const double norm = 1.0 / (static_cast<double>(samples.size()) * dx);
  for (auto& v : density) v *= norm;
  if (outside != nullptr) *outside = dropped;
  return density;
}

}  // namespace selfex
