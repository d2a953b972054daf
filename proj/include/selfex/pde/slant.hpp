#pragma once

#include <vector>

#include "selfex/core/params.hpp"

namespace selfex {

// Mean of the neighbor-value (h(y,x) = y) dynamics, solving
//   dm/dt = (a - omega) m + omega m0,   a = alpha * lambda,  m(0) = m0:
//   m(t) = m0 a/(a - omega) e^{(a - omega) t} - m0 omega/(a - omega),
// and m0 (1 + omega t) when a == omega.
double slant_mean(double t, const ModelParams& params, double m0);

// Fixed point omega m0 / (omega - a) of the mean ODE; requires omega > a.
double slant_mean_limit(const ModelParams& params, double m0);

// a m0 / (omega - a), the coupling-ratio form of the limit that is sometimes
// quoted. It is not the fixed point; kept so reports can show the gap.
double slant_mean_limit_coupling_ratio(const ModelParams& params, double m0);

struct MeanCurvePoint {
  double t;
  double m;
};

// Classical RK4 on the mean ODE with a fixed step, sampled at `times`
// (ascending, starting at or after 0).
std::vector<MeanCurvePoint> integrate_slant_mean_rk4(const ModelParams& params, double m0,
                                                     const std::vector<double>& times, double h);

}  // namespace selfex
