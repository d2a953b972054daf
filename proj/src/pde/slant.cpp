#include "selfex/pde/slant.hpp"

#include <cmath>

#include "selfex/core/error.hpp"

namespace selfex {

double slant_mean(double t, const ModelParams& params, double m0) {
  const double a = params.coupling();
  const double w = params.omega;
  if (t == 0.0) return m0;
  if (a == w) return m0 * (1.0 + w * t);
  const double r = a - w;
  // Same closed form, arranged around expm1 for small |r t|.
  return m0 + m0 * a * std::expm1(r * t) / r;
}

double slant_mean_limit(const ModelParams& params, double m0) {
  require_slant_stable(params);
  return params.omega * m0 / (params.omega - params.coupling());
}

double slant_mean_limit_coupling_ratio(const ModelParams& params, double m0) {
  require_slant_stable(params);
  return params.coupling() * m0 / (params.omega - params.coupling());
}

std::vector<MeanCurvePoint> integrate_slant_mean_rk4(const ModelParams& params, double m0,
                                                     const std::vector<double>& times, double h) {
  require(h > 0.0 && std::isfinite(h), "rk4 step must be positive");
  const double a = params.coupling();
  const double w = params.omega;
  const auto rhs = [&](double m) { return (a - w) * m + w * m0; };

  std::vector<MeanCurvePoint> out;
  out.reserve(times.size());
  double t = 0.0;
  double m = m0;
  for (const double target : times) {
    require(target >= t, "rk4 sample times must be ascending and nonnegative");
    while (t < target) {
      const double step = std::min(h, target - t);
      const double k1 = rhs(m);
      const double k2 = rhs(m + 0.5 * step * k1);
      const double k3 = rhs(m + 0.5 * step * k2);
      const double k4 = rhs(m + step * k3);
      m += step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t = (target - t <= h) ? target : t + step;
    }
    out.push_back({target, m});
  }
  return out;
}

}  // namespace selfex
