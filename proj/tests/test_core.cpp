#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "selfex/core/error.hpp"
#include "selfex/core/initial_distribution.hpp"
#include "selfex/core/kernel.hpp"
#include "selfex/core/params.hpp"
#include "selfex/core/seeded_stream.hpp"

using namespace selfex;

TEST_CASE("kernel values") {
  CHECK(eval_kernel(InteractionKernel::linear_difference(), 3.0, 1.0) == 2.0);
  const auto bc = InteractionKernel::bounded_confidence(1.0, 2.0);
  CHECK(eval_kernel(bc, 5.0, 0.0) == 0.0);
  CHECK(eval_kernel(bc, 1.5, 0.0) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(eval_kernel(bc, 0.5, 0.0) == 0.5);
  CHECK(eval_kernel(bc, -1.5, 0.0) == doctest::Approx(-0.75).epsilon(1e-15));
  CHECK(eval_kernel(InteractionKernel::neighbor_value(), -4.0, 7.0) == -4.0);
}

TEST_CASE("kernel construction rejects bad thresholds") {
  CHECK_THROWS_AS(InteractionKernel::bounded_confidence(2.0, 1.0), Error);
  CHECK_THROWS_AS(InteractionKernel::bounded_confidence(-1.0, 1.0), Error);
  CHECK_THROWS_AS(InteractionKernel::bounded_confidence(0.0, 1.0), Error);
  CHECK_THROWS_AS(InteractionKernel::bounded_confidence(1.0, 1.0), Error);
}

TEST_CASE("kernel names round trip") {
  for (const auto k : {KernelKind::LinearDifference, KernelKind::BoundedConfidence, KernelKind::NeighborValue}) {
    CHECK(kernel_kind_from_string(to_string(k)) == k);
  }
  CHECK_THROWS_AS(kernel_kind_from_string("cubic"), Error);
}

TEST_CASE("kernels satisfy their Lipschitz bounds on random quadruples") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (const auto& h : {InteractionKernel::linear_difference(), InteractionKernel::bounded_confidence(1.0, 2.0),
                        InteractionKernel::bounded_confidence(0.1, 0.5), InteractionKernel::neighbor_value()}) {
    const double L = h.lipschitz_influencer();
    const double K = h.lipschitz_self();
    for (int i = 0; i < 10000; ++i) {
      const double y1 = u(rng), x1 = u(rng);
      // Half the pairs are close so the ramp region is actually exercised.
      const double y2 = i % 2 ? u(rng) : y1 + 0.1 * (u(rng) / 20.0);
      const double x2 = i % 2 ? u(rng) : x1 + 0.1 * (u(rng) / 20.0);
      const double dh = std::fabs(h(y1, x1) - h(y2, x2));
      REQUIRE(dh <= L * std::fabs(y1 - y2) + K * std::fabs(x1 - x2) + 1e-12);
    }
  }
}

TEST_CASE("difference kernels are exactly odd") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  const auto lin = InteractionKernel::linear_difference();
  const auto bc = InteractionKernel::bounded_confidence(1.0, 2.0);
  CHECK(lin.is_odd());
  CHECK(bc.is_odd());
  CHECK_FALSE(InteractionKernel::neighbor_value().is_odd());
  for (int i = 0; i < 10000; ++i) {
    const double y = u(rng), x = u(rng);
    REQUIRE(lin(y, x) == -lin(x, y));
    const double x2 = y + 0.1 * u(rng);
    REQUIRE(bc(y, x2) == -bc(x2, y));
  }
}

TEST_CASE("model parameters are validated") {
  CHECK_NOTHROW(ModelParams{0.01, 0.02, 0.02, 1.0}.validate());
  CHECK_THROWS_AS(ModelParams({-0.01, 0.02, 0.02, 1.0}).validate(), Error);
  CHECK_THROWS_AS(ModelParams({0.01, 0.02, 0.02, 0.0}).validate(), Error);
  CHECK_THROWS_AS(ModelParams({0.01, NAN, 0.02, 1.0}).validate(), Error);
  CHECK_THROWS_AS(require_slant_stable({0.01, 0.02, 0.02, 1.0}), Error);
  CHECK_NOTHROW(require_slant_stable({0.02, 0.01, 0.02, 1.0}));
}

TEST_CASE("philox matches the published known-answer vectors") {
  CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("stream draws are pure functions of their coordinates") {
  const SeededStream a(42, 3), b(42, 3), c(43, 3), d(42, 4);
  CHECK(a == b);
  for (std::uint32_t i = 0; i < 100; ++i) {
    REQUIRE(a.normal(DrawKind::Brownian, 7, i) == b.normal(DrawKind::Brownian, 7, i));
    REQUIRE(a.uniform(DrawKind::Jump, 7, i) != c.uniform(DrawKind::Jump, 7, i));
    REQUIRE(a.uniform(DrawKind::Jump, 7, i) != d.uniform(DrawKind::Jump, 7, i));
    REQUIRE(a.uniform(DrawKind::Jump, 7, i) != a.uniform(DrawKind::Brownian, 7, i));
  }
  CHECK(a.with_stream(4) == d);
}

TEST_CASE("stream uniforms and normals have the right first moments") {
  const SeededStream s(1, 0);
  const int n = 200000;
  double su = 0.0, sn = 0.0, sn2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform(DrawKind::Sequential, 0, static_cast<std::uint32_t>(i));
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    su += u;
    const double z = s.normal(DrawKind::Brownian, 1, static_cast<std::uint32_t>(i));
    sn += z;
    sn2 += z * z;
  }
  CHECK(std::fabs(su / n - 0.5) < 3.0 * std::sqrt(1.0 / 12.0 / n));
  CHECK(std::fabs(sn / n) < 3.0 / std::sqrt(double(n)));
  CHECK(std::fabs(sn2 / n - 1.0) < 3.0 * std::sqrt(2.0 / n));
}

TEST_CASE("poisson counts by inversion have mean and variance equal to the rate") {
  const SeededStream s(5, 0);
  const int n = 200000;
  const double rate = 0.1;
  double m = 0.0, m2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double k = s.poisson(rate, DrawKind::Jump, 0, static_cast<std::uint32_t>(i));
    m += k;
    m2 += k * k;
  }
  m /= n;
  const double var = m2 / n - m * m;
  CHECK(std::fabs(m - rate) < 3.0 * std::sqrt(rate / n));
  CHECK(var == doctest::Approx(rate).epsilon(0.05));
}

TEST_CASE("sequential engine works with standard distributions") {
  auto e1 = SeededStream(9, 1).engine();
  auto e2 = SeededStream(9, 1).engine();
  std::uniform_int_distribution<int> d(0, 99);
  for (int i = 0; i < 50; ++i) REQUIRE(d(e1) == d(e2));
}

TEST_CASE("sample_initial examples") {
  const SeededStream s(11, 0);
  const auto two = InitialDistribution::atoms({{-10.0, 0.5}, {10.0, 0.5}});
  for (const double v : sample_initial(two, 4, s)) CHECK((v == -10.0 || v == 10.0));

  const auto u = sample_initial(InitialDistribution::uniform(0.0, 1.0), 100000, s);
  double mean = 0.0;
  for (const double v : u) mean += v;
  mean /= u.size();
  CHECK(std::fabs(mean - 0.5) < 0.01);

  CHECK(sample_initial(InitialDistribution::atoms({{2.0, 1.0}}), 3, s) == std::vector<double>{2.0, 2.0, 2.0});
}

TEST_CASE("sample_initial is reproducible and prefix-stable") {
  const auto dist = InitialDistribution::uniform(-2.0, 4.0);
  const auto a = sample_initial(dist, 1000, SeededStream(3, 0));
  const auto b = sample_initial(dist, 1000, SeededStream(3, 0));
  CHECK(a == b);
  const auto longer = sample_initial(dist, 5000, SeededStream(3, 0));
  CHECK(std::equal(a.begin(), a.end(), longer.begin()));
}

TEST_CASE("initial distributions validate their inputs") {
  CHECK_THROWS_AS(InitialDistribution::atoms({}), Error);
  CHECK_THROWS_AS(InitialDistribution::atoms({{0.0, 0.6}, {1.0, 0.6}}), Error);
  CHECK_THROWS_AS(InitialDistribution::atoms({{0.0, -0.5}, {1.0, 1.5}}), Error);
  CHECK_THROWS_AS(InitialDistribution::uniform(1.0, 1.0), Error);
  const auto two = InitialDistribution::atoms({{-10.0, 0.5}, {10.0, 0.5}});
  CHECK(two.mean() == 0.0);
  CHECK(two.second_moment() == 100.0);
  const auto u = InitialDistribution::uniform(-2.0, 4.0);
  CHECK(u.mean() == doctest::Approx(1.0));
  CHECK(u.second_moment() == doctest::Approx(4.0));
}

TEST_CASE("discretize_initial examples") {
  const auto two = InitialDistribution::atoms({{-10.0, 0.5}, {10.0, 0.5}});
  CHECK(discretize_initial(two, 5) == two);

  const auto half = discretize_initial(InitialDistribution::uniform(0.0, 1.0), 2);
  REQUIRE(half.atom_list().size() == 2);
  CHECK(half.atom_list()[0] == Atom{0.25, 0.5});
  CHECK(half.atom_list()[1] == Atom{0.75, 0.5});

  CHECK(discretize_initial(InitialDistribution::uniform(0.0, 1.0), 4).mean() == 0.5);

  // More atoms than requested are merged in contiguous groups, keeping the mean.
  const auto four = InitialDistribution::atoms({{0.0, 0.25}, {1.0, 0.25}, {2.0, 0.25}, {3.0, 0.25}});
  const auto merged = discretize_initial(four, 2);
  CHECK(merged.atom_list().size() == 2);
  CHECK(merged.mean() == doctest::Approx(four.mean()));
}
