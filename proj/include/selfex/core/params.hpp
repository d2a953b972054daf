#pragma once

namespace selfex {

// Scalar coefficients of the self-exciting opinion dynamics.
//   omega  - decay of the exponential memory kernel, i.e. reversion rate to b
//   alpha  - interaction strength (multiplies the kernel h externally)
//   sigma  - Brownian amplitude
//   lambda - Poisson event rate of every agent
struct ModelParams {
  double omega = 0.0;
  double alpha = 0.0;
  double sigma = 0.0;
  double lambda = 1.0;

  // Throws InvalidArgument unless all fields are finite, omega/alpha/sigma are
  // nonnegative and lambda is positive.
  void validate() const;

  // Effective mean-field interaction rate alpha * lambda.
  double coupling() const noexcept { return alpha * lambda; }
};

// Steady-state analysis of the neighbor-value kernel needs omega > alpha*lambda.
void require_slant_stable(const ModelParams& params);

}  // namespace selfex
