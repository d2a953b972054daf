// AVX2 variants of the reference kernels in kernels_scalar.cpp. Compiled with
// -mavx2 and only entered after a runtime CPU check. No FMA: lanes must round
// exactly like the scalar code.

#include <immintrin.h>

#include "selfex/simd/kernels.hpp"
#include "kernel_eval.hpp"

namespace selfex::simd {

namespace {

constexpr std::size_t kLanes = 4;

inline __m256d abs_pd(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

// Four lanes of h(y, x) with y broadcast.
inline __m256d eval_lanes(const KernelShape& h, __m256d y, __m256d x) {
  switch (h.kind) {
    case KernelKind::LinearDifference:
      return _mm256_sub_pd(y, x);
    case KernelKind::BoundedConfidence: {
      const __m256d d = _mm256_sub_pd(y, x);
      __m256d k = _mm256_mul_pd(_mm256_sub_pd(_mm256_set1_pd(h.delta2), abs_pd(d)),
                                _mm256_set1_pd(h.inv_ramp));
      k = _mm256_max_pd(k, _mm256_setzero_pd());
      k = _mm256_min_pd(k, _mm256_set1_pd(1.0));
      return _mm256_mul_pd(d, k);
    }
    case KernelKind::NeighborValue:
      return y;
  }
  return _mm256_setzero_pd();
}

void euler_update(std::span<double> x, std::span<const double> b, std::span<const double> xi,
                  std::span<const double> extra, const EulerCoeffs& c) {
  const std::size_t n = x.size();
  const __m256d dt = _mm256_set1_pd(c.dt);
  const __m256d omega = _mm256_set1_pd(c.omega);
  const __m256d d0 = _mm256_set1_pd(c.drift0);
  const __m256d d1 = _mm256_set1_pd(c.drift1);
  const __m256d ns = _mm256_set1_pd(c.noise_scale);
  const bool has_noise = !xi.empty();
  const bool has_extra = !extra.empty();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d xv = _mm256_loadu_pd(x.data() + i);
    const __m256d bv = _mm256_loadu_pd(b.data() + i);
    __m256d drift = _mm256_mul_pd(omega, _mm256_sub_pd(bv, xv));
    drift = _mm256_add_pd(drift, d0);
    drift = _mm256_add_pd(drift, _mm256_mul_pd(d1, xv));
    __m256d next = _mm256_add_pd(xv, _mm256_mul_pd(dt, drift));
    if (has_noise) next = _mm256_add_pd(next, _mm256_mul_pd(ns, _mm256_loadu_pd(xi.data() + i)));
    if (has_extra) next = _mm256_add_pd(next, _mm256_loadu_pd(extra.data() + i));
    _mm256_storeu_pd(x.data() + i, next);
  }
  for (; i < n; ++i) {
    const double xv = x[i];
    const double drift = c.omega * (b[i] - xv) + c.drift0 + c.drift1 * xv;
    double next = xv + c.dt * drift;
    if (has_noise) next = next + c.noise_scale * xi[i];
    if (has_extra) next = next + extra[i];
    x[i] = next;
  }
}

void broadcast_jump(std::span<double> out, std::span<const double> x, double source,
                    double weight, std::size_t skip, const KernelShape& h) {
  const std::size_t n = out.size();
  const bool restore = skip < n;
  const double saved = restore ? out[skip] : 0.0;
  const __m256d y = _mm256_set1_pd(source);
  const __m256d wv = _mm256_set1_pd(weight);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d hv = eval_lanes(h, y, _mm256_loadu_pd(x.data() + i));
    const __m256d o = _mm256_loadu_pd(out.data() + i);
    _mm256_storeu_pd(out.data() + i, _mm256_add_pd(o, _mm256_mul_pd(wv, hv)));
  }
  for (; i < n; ++i) out[i] = out[i] + weight * detail::eval_shape(h, source, x[i]);
  if (restore) out[skip] = saved;
}

void linear_jump(std::span<double> out, std::span<const double> x,
                 std::span<const double> counts, double s1, double s0, double scale,
                 double self) {
  const std::size_t n = out.size();
  const __m256d vs1 = _mm256_set1_pd(s1);
  const __m256d vs0 = _mm256_set1_pd(s0);
  const __m256d vscale = _mm256_set1_pd(scale);
  const __m256d vself = _mm256_set1_pd(self);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d xv = _mm256_loadu_pd(x.data() + i);
    const __m256d kv = _mm256_loadu_pd(counts.data() + i);
    const __m256d others_x = _mm256_sub_pd(vs1, _mm256_mul_pd(kv, xv));
    const __m256d others_n = _mm256_sub_pd(vs0, kv);
    const __m256d self_term = _mm256_mul_pd(_mm256_mul_pd(vself, xv), others_n);
    _mm256_storeu_pd(out.data() + i, _mm256_mul_pd(vscale, _mm256_sub_pd(others_x, self_term)));
  }
  for (; i < n; ++i) {
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
  const bool weighted = !w.empty();
  std::size_t i = 0;
  // Two independent target blocks per pass hide the add latency.
  for (; i + 2 * kLanes <= n; i += 2 * kLanes) {
    const __m256d t0 = _mm256_loadu_pd(targets.data() + i);
    const __m256d t1 = _mm256_loadu_pd(targets.data() + i + kLanes);
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    for (std::size_t j = 0; j < m; ++j) {
      const __m256d y = _mm256_set1_pd(sources[j]);
      __m256d h0 = eval_lanes(h, y, t0);
      __m256d h1 = eval_lanes(h, y, t1);
      if (weighted) {
        const __m256d wj = _mm256_set1_pd(w[j]);
        h0 = _mm256_mul_pd(wj, h0);
        h1 = _mm256_mul_pd(wj, h1);
      }
      acc0 = _mm256_add_pd(acc0, h0);
      acc1 = _mm256_add_pd(acc1, h1);
    }
    const __m256d vs = _mm256_set1_pd(scale);
    _mm256_storeu_pd(out.data() + i, _mm256_mul_pd(vs, acc0));
    _mm256_storeu_pd(out.data() + i + kLanes, _mm256_mul_pd(vs, acc1));
  }
  for (; i < n; ++i) {
    const double t = targets[i];
    double acc = 0.0;
    if (weighted) {
      for (std::size_t j = 0; j < m; ++j) acc = acc + w[j] * detail::eval_shape(h, sources[j], t);
    } else {
      for (std::size_t j = 0; j < m; ++j) acc = acc + detail::eval_shape(h, sources[j], t);
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
  const __m256d zero = _mm256_setzero_pd();
  const __m256d dd = _mm256_set1_pd(diffusion_over_dx);
  std::size_t f = 1;
  for (; f + kLanes <= n; f += kLanes) {
    const __m256d v = _mm256_loadu_pd(face_velocity.data() + f);
    const __m256d left = _mm256_loadu_pd(p_in.data() + f - 1);
    const __m256d right = _mm256_loadu_pd(p_in.data() + f);
    const __m256d vp = _mm256_max_pd(v, zero);
    const __m256d vm = _mm256_min_pd(v, zero);
    const __m256d adv = _mm256_add_pd(_mm256_mul_pd(vp, left), _mm256_mul_pd(vm, right));
    const __m256d dif = _mm256_mul_pd(dd, _mm256_sub_pd(right, left));
    _mm256_storeu_pd(flux.data() + f, _mm256_sub_pd(adv, dif));
  }
  for (; f < n; ++f) {
    const double v = face_velocity[f];
    const double vp = v > 0.0 ? v : 0.0;
    const double vm = v < 0.0 ? v : 0.0;
    flux[f] = vp * p_in[f - 1] + vm * p_in[f] - diffusion_over_dx * (p_in[f] - p_in[f - 1]);
  }
  const __m256d c = _mm256_set1_pd(dt_over_dx);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d fr = _mm256_loadu_pd(flux.data() + i + 1);
    const __m256d fl = _mm256_loadu_pd(flux.data() + i);
    const __m256d p = _mm256_loadu_pd(p_in.data() + i);
    _mm256_storeu_pd(p_out.data() + i, _mm256_sub_pd(p, _mm256_mul_pd(c, _mm256_sub_pd(fr, fl))));
  }
  for (; i < n; ++i) p_out[i] = p_in[i] - dt_over_dx * (flux[i + 1] - flux[i]);
}

void fv_advance_limited(std::span<double> p_out, std::span<const double> p_in,
                        std::span<const double> face_velocity, std::span<double> flux,
                        std::span<double> slope, double dt_over_dx, double diffusion_over_dx) {
  const std::size_t n = p_in.size();
  const __m256d zero = _mm256_setzero_pd();
  const __m256d half = _mm256_set1_pd(0.5);
  slope[0] = 0.0;
  slope[n - 1] = 0.0;
  std::size_t i = 1;
  for (; i + kLanes < n; i += kLanes) {
    const __m256d pl = _mm256_loadu_pd(p_in.data() + i - 1);
    const __m256d pc = _mm256_loadu_pd(p_in.data() + i);
    const __m256d pr = _mm256_loadu_pd(p_in.data() + i + 1);
    const __m256d a = _mm256_sub_pd(pc, pl);
    const __m256d b = _mm256_sub_pd(pr, pc);
    const __m256d ab = _mm256_mul_pd(a, b);
    const __m256d q = _mm256_div_pd(_mm256_add_pd(ab, ab), _mm256_add_pd(a, b));
    const __m256d pos = _mm256_cmp_pd(ab, zero, _CMP_GT_OQ);
    _mm256_storeu_pd(slope.data() + i, _mm256_and_pd(pos, q));
  }
  for (; i + 1 < n; ++i) slope[i] = detail::van_leer(p_in[i] - p_in[i - 1], p_in[i + 1] - p_in[i]);

  flux[0] = 0.0;
  flux[n] = 0.0;
  const __m256d dd = _mm256_set1_pd(diffusion_over_dx);
  std::size_t f = 1;
  for (; f + kLanes <= n; f += kLanes) {
    const __m256d v = _mm256_loadu_pd(face_velocity.data() + f);
    const __m256d pl = _mm256_loadu_pd(p_in.data() + f - 1);
    const __m256d pr = _mm256_loadu_pd(p_in.data() + f);
    const __m256d left = _mm256_add_pd(pl, _mm256_mul_pd(half, _mm256_loadu_pd(slope.data() + f - 1)));
    const __m256d right = _mm256_sub_pd(pr, _mm256_mul_pd(half, _mm256_loadu_pd(slope.data() + f)));
    const __m256d vp = _mm256_max_pd(v, zero);
    const __m256d vm = _mm256_min_pd(v, zero);
    const __m256d adv = _mm256_add_pd(_mm256_mul_pd(vp, left), _mm256_mul_pd(vm, right));
    const __m256d dif = _mm256_mul_pd(dd, _mm256_sub_pd(pr, pl));
    _mm256_storeu_pd(flux.data() + f, _mm256_sub_pd(adv, dif));
  }
  for (; f < n; ++f) {
    const double v = face_velocity[f];
    const double vp = v > 0.0 ? v : 0.0;
    const double vm = v < 0.0 ? v : 0.0;
    const double left = p_in[f - 1] + 0.5 * slope[f - 1];
    const double right = p_in[f] - 0.5 * slope[f];
    flux[f] = vp * left + vm * right - diffusion_over_dx * (p_in[f] - p_in[f - 1]);
  }
  const __m256d c = _mm256_set1_pd(dt_over_dx);
  i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d fr = _mm256_loadu_pd(flux.data() + i + 1);
    const __m256d fl = _mm256_loadu_pd(flux.data() + i);
    const __m256d p = _mm256_loadu_pd(p_in.data() + i);
    _mm256_storeu_pd(p_out.data() + i, _mm256_sub_pd(p, _mm256_mul_pd(c, _mm256_sub_pd(fr, fl))));
  }
  for (; i < n; ++i) p_out[i] = p_in[i] - dt_over_dx * (flux[i + 1] - flux[i]);
}

WeightedSums weighted_sums(std::span<const double> w, std::span<const double> x) {
  const std::size_t n = x.size();
  __m256d sw = _mm256_setzero_pd();
  __m256d swx = _mm256_setzero_pd();
  __m256d swxx = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d wv = _mm256_loadu_pd(w.data() + i);
    const __m256d xv = _mm256_loadu_pd(x.data() + i);
    const __m256d wx = _mm256_mul_pd(wv, xv);
    sw = _mm256_add_pd(sw, wv);
    swx = _mm256_add_pd(swx, wx);
    swxx = _mm256_add_pd(swxx, _mm256_mul_pd(wx, xv));
  }
  alignas(32) double lanes[3][kLanes];
  _mm256_store_pd(lanes[0], sw);
  _mm256_store_pd(lanes[1], swx);
  _mm256_store_pd(lanes[2], swxx);
  WeightedSums s;
  s.w = (lanes[0][0] + lanes[0][1]) + (lanes[0][2] + lanes[0][3]);
  s.wx = (lanes[1][0] + lanes[1][1]) + (lanes[1][2] + lanes[1][3]);
  s.wxx = (lanes[2][0] + lanes[2][1]) + (lanes[2][2] + lanes[2][3]);
  for (; i < n; ++i) {
    const double wx = w[i] * x[i];
    s.w += w[i];
    s.wx += wx;
    s.wxx += wx * x[i];
  }
  return s;
}

}  // namespace

const KernelTable* avx2_table() noexcept {
  static const KernelTable table{Level::Avx2, euler_update, broadcast_jump, linear_jump,
                                 pair_sum,    fv_advance,   fv_advance_limited,
                                 weighted_sums};
  return &table;
}

}  // namespace selfex::simd
