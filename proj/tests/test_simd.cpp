#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "doctest.h"
#include "selfex/simd/kernels.hpp"

using namespace selfex;
using selfex::simd::KernelShape;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed, double lo, double hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

const std::vector<KernelShape> kShapes{
    KernelShape::of(InteractionKernel::linear_difference()),
    KernelShape::of(InteractionKernel::bounded_confidence(0.5, 1.5)),
    KernelShape::of(InteractionKernel::neighbor_value()),
};

// Sizes around the 4-lane width so every tail length is exercised.
const std::vector<std::size_t> kSizes{1, 3, 4, 5, 7, 8, 9, 16, 17, 31, 64, 101};

}  // namespace

TEST_CASE("scalar table is always available") {
  CHECK(simd::scalar_table().level == simd::Level::Scalar);
  CHECK(simd::cpu_supports(simd::Level::Scalar));
  CHECK(simd::table_for(simd::Level::Scalar).level == simd::Level::Scalar);
}

TEST_CASE("avx2 kernels are bit-identical to the scalar reference") {
  const simd::KernelTable* avx = simd::avx2_table();
  if (avx == nullptr || !simd::cpu_supports(simd::Level::Avx2)) {
    MESSAGE("AVX2 not available; equivalence test skipped");
    return;
  }
  const auto& sc = simd::scalar_table();

  for (const std::size_t n : kSizes) {
    CAPTURE(n);
    const auto x0 = random_vector(n, 1 + n, -3.0, 3.0);
    const auto b = random_vector(n, 2 + n, -3.0, 3.0);
    const auto xi = random_vector(n, 3 + n, -2.0, 2.0);
    const auto extra = random_vector(n, 4 + n, -0.1, 0.1);
    const auto counts = random_vector(n, 5 + n, 0.0, 2.0);

    SUBCASE("euler update") {
      const simd::EulerCoeffs c{0.05, 0.01, 0.003, -0.02, 0.0044};
      for (const bool with_extra : {false, true}) {
        auto xs = x0, xa = x0;
        const std::span<const double> e = with_extra ? std::span<const double>(extra) : std::span<const double>();
        sc.euler_update(xs, b, xi, e, c);
        avx->euler_update(xa, b, xi, e, c);
        CHECK(bit_equal(xs, xa));
      }
      auto xs = x0, xa = x0;
      sc.euler_update(xs, b, {}, {}, c);
      avx->euler_update(xa, b, {}, {}, c);
      CHECK(bit_equal(xs, xa));
    }
    SUBCASE("broadcast jump") {
      for (const auto& h : kShapes) {
        auto os = extra, oa = extra;
        sc.broadcast_jump(os, x0, 0.7, 0.013, n / 2, h);
        avx->broadcast_jump(oa, x0, 0.7, 0.013, n / 2, h);
        CHECK(bit_equal(os, oa));
      }
    }
    SUBCASE("linear jump") {
      for (const double self : {0.0, 1.0}) {
        std::vector<double> os(n), oa(n);
        sc.linear_jump(os, x0, counts, 1.7, 4.0, 0.02 / 64, self);
        avx->linear_jump(oa, x0, counts, 1.7, 4.0, 0.02 / 64, self);
        CHECK(bit_equal(os, oa));
      }
    }
    SUBCASE("pair sum") {
      const auto sources = random_vector(n + 3, 6 + n, -3.0, 3.0);
      const auto w = random_vector(n + 3, 7 + n, 0.0, 1.0);
      for (const auto& h : kShapes) {
        for (const bool weighted : {false, true}) {
          std::vector<double> os(n), oa(n);
          const std::span<const double> ws = weighted ? std::span<const double>(w) : std::span<const double>();
          sc.pair_sum(os, x0, sources, ws, 0.5, h);
          avx->pair_sum(oa, x0, sources, ws, 0.5, h);
          CHECK(bit_equal(os, oa));
        }
      }
    }
    SUBCASE("finite-volume steps") {
      if (n >= 2) {
        const auto p = random_vector(n, 8 + n, 0.0, 1.0);
        const auto v = random_vector(n + 1, 9 + n, -0.5, 0.5);
        std::vector<double> ps(n), pa(n), fs(n + 1), fa(n + 1), ss(n), sa(n);
        sc.fv_advance(ps, p, v, fs, 0.4, 0.01);
        avx->fv_advance(pa, p, v, fa, 0.4, 0.01);
        CHECK(bit_equal(ps, pa));
        sc.fv_advance_limited(ps, p, v, fs, ss, 0.4, 0.01);
        avx->fv_advance_limited(pa, p, v, fa, sa, 0.4, 0.01);
        CHECK(bit_equal(ps, pa));
      }
    }
    SUBCASE("weighted sums agree to rounding") {
      const auto w = random_vector(n, 10 + n, 0.0, 1.0);
      const auto s = sc.weighted_sums(w, x0);
      const auto a = avx->weighted_sums(w, x0);
      CHECK(a.w == doctest::Approx(s.w).epsilon(1e-13));
      CHECK(a.wx == doctest::Approx(s.wx).epsilon(1e-12).scale(1.0));
      CHECK(a.wxx == doctest::Approx(s.wxx).epsilon(1e-13));
    }
  }
}

TEST_CASE("bounded-confidence lanes reproduce the kernel object exactly") {
  const auto kernel = InteractionKernel::bounded_confidence(0.5, 1.5);
  const auto shape = KernelShape::of(kernel);
  const auto x = random_vector(37, 99, -2.0, 2.0);
  for (const auto* table : {&simd::scalar_table(), simd::avx2_table()}) {
    if (table == nullptr || !simd::cpu_supports(table->level)) continue;
    std::vector<double> out(x.size(), 0.0);
    table->broadcast_jump(out, x, 0.3, 1.0, x.size(), shape);
    for (std::size_t i = 0; i < x.size(); ++i) REQUIRE(out[i] == kernel(0.3, x[i]));
  }
}

TEST_CASE("limited reconstruction keeps zero and constant states fixed") {
  for (const auto* table : {&simd::scalar_table(), simd::avx2_table()}) {
    if (table == nullptr || !simd::cpu_supports(table->level)) continue;
    const std::size_t n = 13;
    std::vector<double> zero(n, 0.0), out(n), flux(n + 1), slope(n);
    const auto v = random_vector(n + 1, 5, -1.0, 1.0);
    table->fv_advance_limited(out, zero, v, flux, slope, 0.4, 0.1);
    for (const double p : out) CHECK(p == 0.0);
    // Uniform state with zero velocity and pure diffusion: unchanged.
    std::vector<double> flat(n, 2.5), still(n + 1, 0.0);
    table->fv_advance_limited(out, flat, still, flux, slope, 0.4, 0.1);
    for (const double p : out) CHECK(p == 2.5);
  }
}
