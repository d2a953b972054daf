#include "selfex/core/kernel.hpp"

#include "selfex/core/error.hpp"

namespace selfex {

std::string to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::LinearDifference: return "linear_difference";
    case KernelKind::BoundedConfidence: return "bounded_confidence";
    case KernelKind::NeighborValue: return "neighbor_value";
  }
  return "unknown";
}

KernelKind kernel_kind_from_string(const std::string& name) {
  if (name == "linear_difference") return KernelKind::LinearDifference;
  if (name == "bounded_confidence") return KernelKind::BoundedConfidence;
  if (name == "neighbor_value") return KernelKind::NeighborValue;
  fail(ErrorCode::InvalidArgument, "unknown kernel '" + name + "'");
}

InteractionKernel InteractionKernel::linear_difference() {
  return {KernelKind::LinearDifference, 0.0, 0.0, 0.0};
}

InteractionKernel InteractionKernel::bounded_confidence(double delta1, double delta2) {
  require(std::isfinite(delta1) && std::isfinite(delta2) && 0.0 < delta1 && delta1 < delta2,
          "bounded confidence needs 0 < delta1 < delta2");
  return {KernelKind::BoundedConfidence, delta1, delta2, 1.0 / (delta2 - delta1)};
}

InteractionKernel InteractionKernel::neighbor_value() {
  return {KernelKind::NeighborValue, 0.0, 0.0, 0.0};
}

// For the ramp kernel h = g(y - x) with g(d) = d k(|d|); |g'| peaks at the
// outer end of the ramp where it equals delta2 / (delta2 - delta1).
double InteractionKernel::lipschitz_influencer() const noexcept {
  switch (kind_) {
    case KernelKind::LinearDifference: return 1.0;
    case KernelKind::BoundedConfidence: return delta2_ * inv_ramp_;
    case KernelKind::NeighborValue: return 1.0;
  }
  return 0.0;
}

double InteractionKernel::lipschitz_self() const noexcept {
  switch (kind_) {
    case KernelKind::LinearDifference: return 1.0;
    case KernelKind::BoundedConfidence: return delta2_ * inv_ramp_;
    case KernelKind::NeighborValue: return 0.0;
  }
  return 0.0;
}

}  // namespace selfex
