#include "selfex/core/initial_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "selfex/core/error.hpp"

namespace selfex {

InitialDistribution InitialDistribution::atoms(std::vector<Atom> atoms) {
  require(!atoms.empty(), "atom list must be nonempty");
  double total = 0.0;
  for (const auto& a : atoms) {
    require(std::isfinite(a.location), "atom locations must be finite");
    require(std::isfinite(a.weight) && a.weight > 0.0, "atom weights must be positive");
    total += a.weight;
  }
  require(std::fabs(total - 1.0) <= 1e-12, "atom weights must sum to 1");
  InitialDistribution d;
  d.kind_ = Kind::Atoms;
  d.atoms_ = std::move(atoms);
  return d;
}

InitialDistribution InitialDistribution::uniform(double lo, double hi) {
  require(std::isfinite(lo) && std::isfinite(hi) && lo < hi, "uniform law needs lo < hi");
  InitialDistribution d;
  d.kind_ = Kind::Uniform;
  d.lo_ = lo;
  d.hi_ = hi;
  return d;
}

double InitialDistribution::mean() const noexcept {
  if (kind_ == Kind::Uniform) return 0.5 * (lo_ + hi_);
  double m = 0.0;
  for (const auto& a : atoms_) m += a.weight * a.location;
  return m;
}

double InitialDistribution::second_moment() const noexcept {
  if (kind_ == Kind::Uniform) return (lo_ * lo_ + lo_ * hi_ + hi_ * hi_) / 3.0;
  double m2 = 0.0;
  for (const auto& a : atoms_) m2 += a.weight * a.location * a.location;
  return m2;
}

double InitialDistribution::support_min() const noexcept {
  if (kind_ == Kind::Uniform) return lo_;
  double v = atoms_.front().location;
  for (const auto& a : atoms_) v = std::min(v, a.location);
  return v;
}

double InitialDistribution::support_max() const noexcept {
  if (kind_ == Kind::Uniform) return hi_;
  double v = atoms_.front().location;
  for (const auto& a : atoms_) v = std::max(v, a.location);
  return v;
}

std::vector<double> sample_initial(const InitialDistribution& dist, std::size_t n,
                                   const SeededStream& stream) {
  require(n >= 1, "sample_initial needs n >= 1");
  std::vector<double> out(n);
  if (dist.kind() == InitialDistribution::Kind::Uniform) {
    const double lo = dist.lo();
    const double width = dist.hi() - dist.lo();
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = lo + width * stream.uniform(DrawKind::Initial, 0, static_cast<std::uint32_t>(i));
    }
    return out;
  }
  const auto& atoms = dist.atom_list();
  std::vector<double> cdf(atoms.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < atoms.size(); ++k) cdf[k] = (acc += atoms[k].weight);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = stream.uniform(DrawKind::Initial, 0, static_cast<std::uint32_t>(i)) * acc;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const std::size_t k = std::min<std::size_t>(it - cdf.begin(), atoms.size() - 1);
    out[i] = atoms[k].location;
  }
  return out;
}

InitialDistribution discretize_initial(const InitialDistribution& dist, std::size_t k) {
  require(k >= 1, "discretize_initial needs k >= 1");
  if (dist.kind() == InitialDistribution::Kind::Uniform) {
    std::vector<Atom> atoms(k);
    const double width = dist.hi() - dist.lo();
    for (std::size_t i = 0; i < k; ++i) {
      atoms[i] = {dist.lo() + width * (static_cast<double>(i) + 0.5) / static_cast<double>(k),
                  1.0 / static_cast<double>(k)};
    }
    return InitialDistribution::atoms(std::move(atoms));
  }
  const auto& src = dist.atom_list();
  if (src.size() <= k) return dist;

  // Merge sorted atoms into k contiguous groups; each group keeps its mass
  // and its conditional mean, so the overall mean is unchanged.
  std::vector<Atom> sorted = src;
  std::sort(sorted.begin(), sorted.end(),
            [](const Atom& a, const Atom& b) { return a.location < b.location; });
  std::vector<Atom> merged;
  merged.reserve(k);
  const std::size_t n = sorted.size();
  for (std::size_t g = 0; g < k; ++g) {
    const std::size_t begin = g * n / k;
    const std::size_t end = (g + 1) * n / k;
    double w = 0.0, wx = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      w += sorted[i].weight;
      wx += sorted[i].weight * sorted[i].location;
    }
    merged.push_back({wx / w, w});
  }
  double total = 0.0;
  for (const auto& a : merged) total += a.weight;
  for (auto& a : merged) a.weight /= total;
  return InitialDistribution::atoms(std::move(merged));
}

}  // namespace selfex
