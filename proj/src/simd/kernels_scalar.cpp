// Scalar reference kernels. The AVX2 variants mirror these operation by
// operation; keep both in sync when changing any arithmetic here.

#include "selfex/simd/kernels.hpp"
#include "kernel_eval.hpp"

namespace selfex::simd {

namespace {

void euler_update(std::span<double> x, std::span<const double> b, std::span<const double> xi,
                  std::span<const double> extra, const EulerCoeffs& c) {
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double xv = x[i];
    const double drift = c.omega * (b[i] - xv) + c.drift0 + c.drift1 * xv;
    double next = xv + c.dt * drift;
    if (!xi.empty()) next = next + c.noise_scale * xi[i];
    if (!extra.empty()) next = next + extra[i];
    x[i] = next;
  }
}

void broadcast_jump(std::span<double> out, std::span<const double> x, double source,
                    double weight, std::size_t skip, const KernelShape& h) {
  const std::size_t n = out.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (i == skip) continue;
    out[i] = out[i] + weight * detail::eval_shape(h, source, x[i]);
  }
}

void linear_jump(std::span<double> out, std::span<const double> x,
                 std::span<const double> counts, double s1, double s0, double scale,
                 double self) {
  const std::size_t n = out.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double others_x = s1 - counts[i] * x[i];
    const double others_n = s0 - counts[i];
    out[i] = scale * (others_x - self * x[i] * others_n);
  }
}

void pair_sum(std::span<double> out, std::span<const double> targets,
              std::span<const double> sources, std::span<const double> w, double scale,
              const KernelShape& h) {
  const std::size_t n = targets.size();
  const std::size_t m = sources.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double t = targets[i];
    double acc = 0.0;
    if (w.empty()) {
      for (std::size_t j = 0; j < m; ++j) acc = acc + detail::eval_shape(h, sources[j], t);
    } else {
      for (std::size_t j = 0; j < m; ++j) acc = acc + w[j] * detail::eval_shape(h, sources[j], t);
    }
    out[i] = scale * acc;
  }
}

void fv_advance(std::span<double> p_out, std::span<const double> p_in,
                std::span<const double> face_velocity, std::span<double> flux,
                double dt_over_dx, double diffusion_over_dx) {
  const std::size_t n = p_in.size();
  flux[0] = 0.0;
  flux[n] = 0.0;
  for (std::size_t f = 1; f < n; ++f) {
    const double v = face_velocity[f];
    const double vp = v > 0.0 ? v : 0.0;
    const double vm = v < 0.0 ? v : 0.0;
    flux[f] = vp * p_in[f - 1] + vm * p_in[f] - diffusion_over_dx * (p_in[f] - p_in[f - 1]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    p_out[i] = p_in[i] - dt_over_dx * (flux[i + 1] - flux[i]);
  }
}

void fv_advance_limited(std::span<double> p_out, std::span<const double> p_in,
                        std::span<const double> face_velocity, std::span<double> flux,
                        std::span<double> slope, double dt_over_dx, double diffusion_over_dx) {
  const std::size_t n = p_in.size();
  slope[0] = 0.0;
  slope[n - 1] = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) slope[i] = detail::van_leer(p_in[i] - p_in[i - 1], p_in[i + 1] - p_in[i]);
  flux[0] = 0.0;
  flux[n] = 0.0;
  for (std::size_t f = 1; f < n; ++f) {
    const double v = face_velocity[f];
    const double vp = v > 0.0 ? v : 0.0;
    const double vm = v < 0.0 ? v : 0.0;
    const double left = p_in[f - 1] + 0.5 * slope[f - 1];
    const double right = p_in[f] - 0.5 * slope[f];
    flux[f] = vp * left + vm * right - diffusion_over_dx * (p_in[f] - p_in[f - 1]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    p_out[i] = p_in[i] - dt_over_dx * (flux[i + 1] - flux[i]);
  }
}

WeightedSums weighted_sums(std::span<const double> w, std::span<const double> x) {
  WeightedSums s;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double wi = w[i];
    const double wx = wi * x[i];
    s.w += wi;
    s.wx += wx;
    s.wxx += wx * x[i];
  }
  return s;
}

}  // namespace

const KernelTable& scalar_table() noexcept {
  static const KernelTable table{Level::Scalar, euler_update,  broadcast_jump, linear_jump,
                                 pair_sum,      fv_advance,    fv_advance_limited,
                                 weighted_sums};
  return table;
}

}  // namespace selfex::simd
