#include "selfex/core/params.hpp"

#include <cmath>

#include "selfex/core/error.hpp"

namespace selfex {

void ModelParams::validate() const {
  require(std::isfinite(omega) && std::isfinite(alpha) && std::isfinite(sigma) &&
              std::isfinite(lambda),
          "model parameters must be finite");
  require(omega >= 0.0, "omega must be >= 0");
  require(alpha >= 0.0, "alpha must be >= 0");
  require(sigma >= 0.0, "sigma must be >= 0");
  require(lambda > 0.0, "lambda must be > 0");
}

void require_slant_stable(const ModelParams& params) {
  if (!(params.omega > params.coupling())) {
    fail(ErrorCode::DegenerateParams,
         "neighbor-value steady state needs omega > alpha*lambda");
  }
}

}  // namespace selfex
