#pragma once

#include <algorithm>
#include <cmath>
#include <string>

namespace selfex {

enum class KernelKind {
  LinearDifference,   // h(y,x) = y - x
  BoundedConfidence,  // h(y,x) = (y - x) k(|y - x|), k a ramp from 1 to 0
  NeighborValue,      // h(y,x) = y
};

std::string to_string(KernelKind kind);
KernelKind kernel_kind_from_string(const std::string& name);

// Interaction kernel h(y, x). The first argument is the influencer (neighbor
// j, or the integration variable of the mean-field term); the second is the
// agent being updated. The interaction strength alpha is not part of h.
class InteractionKernel {
 public:
  static InteractionKernel linear_difference();
  // Plateau k = 1 on |y-x| < delta1, k = 0 on |y-x| > delta2, linear between.
  static InteractionKernel bounded_confidence(double delta1, double delta2);
  static InteractionKernel neighbor_value();

  KernelKind kind() const noexcept { return kind_; }
  double delta1() const noexcept { return delta1_; }
  double delta2() const noexcept { return delta2_; }
  // 1 / (delta2 - delta1); zero for the other variants.
  double inverse_ramp() const noexcept { return inv_ramp_; }

  double operator()(double y, double x) const noexcept {
    switch (kind_) {
      case KernelKind::LinearDifference:
        return y - x;
      case KernelKind::BoundedConfidence: {
        const double d = y - x;
        const double k = std::min(1.0, std::max(0.0, (delta2_ - std::fabs(d)) * inv_ramp_));
        return d * k;
      }
      case KernelKind::NeighborValue:
        return y;
    }
    return 0.0;
  }

  // Lipschitz constants: |h(y1,x1) - h(y2,x2)| <= L |y1-y2| + K |x1-x2|.
  double lipschitz_influencer() const noexcept;
  double lipschitz_self() const noexcept;

  // h(y,x) = -h(x,y) holds exactly.
  bool is_odd() const noexcept { return kind_ != KernelKind::NeighborValue; }

  friend bool operator==(const InteractionKernel&, const InteractionKernel&) = default;

 private:
  InteractionKernel(KernelKind kind, double d1, double d2, double inv)
      : kind_(kind), delta1_(d1), delta2_(d2), inv_ramp_(inv) {}

  KernelKind kind_;
  double delta1_;
  double delta2_;
  double inv_ramp_;
};

inline double eval_kernel(const InteractionKernel& kernel, double y, double x) noexcept {
  return kernel(y, x);
}

}  // namespace selfex
