#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "selfex/analysis/metrics.hpp"
#include "selfex/core/error.hpp"
#include "selfex/particles/experiments.hpp"
#include "selfex/pde/fokker_planck.hpp"
#include "selfex/pde/slant.hpp"
#include "selfex/pde/steady_state.hpp"

using namespace selfex;

namespace {

const ModelParams kFig{0.01, 0.02, 0.02, 1.0};
const InitialDistribution kTwoAtoms = InitialDistribution::atoms({{-10.0, 0.5}, {10.0, 0.5}});

double variance_of(std::span<const double> p, const Grid1D& grid) {
  const double m = density_mean(p, grid);
  return density_second_moment(p, grid) - m * m;
}

double mirror_gap(std::span<const double> p) {
  double gap = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) gap = std::max(gap, std::fabs(p[i] - p[p.size() - 1 - i]));
  return gap;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ConfigError;
}

}  // namespace

TEST_CASE("nearest cell ties go toward the middle") {
  const Grid1D grid{-1.0, 1.0, 20};
  CHECK(grid.nearest_cell(0.5) == 14);
  CHECK(grid.nearest_cell(-0.5) == 5);
  CHECK(grid.nearest_cell(-1e-9) == 9);
  CHECK(grid.nearest_cell(1e-9) == 10);
  CHECK(grid.nearest_cell(-5.0) == 0);
  CHECK(grid.nearest_cell(5.0) == 19);
  CHECK(grid.nearest_cell(0.3) == 19 - grid.nearest_cell(-0.3));
}

TEST_CASE("drift field examples") {
  const Grid1D grid{-2.0, 2.0, 400};
  auto family = BFamilyDensity::dirac_initial(InitialDistribution::atoms({{0.5, 1.0}}), grid);
  const ModelParams p{0.0, 0.1, 0.1, 1.0};
  const double m = density_mean(family.row(0), grid);
  CHECK(std::fabs(m - 0.5) <= grid.dx());
  const auto beta = drift_field(family, 0, p, InteractionKernel::linear_difference(), grid);
  const auto quad = drift_field(family, 0, p, InteractionKernel::linear_difference(), grid, true);
  for (std::size_t i = 0; i < grid.nx; ++i) {
    REQUIRE(beta[i] == doctest::Approx(0.1 * (m - grid.center(i))).epsilon(1e-12).scale(1.0));
    REQUIRE(quad[i] == doctest::Approx(beta[i]).epsilon(1e-12).scale(1.0));
  }
  // Interaction off: the pure OU drift omega (b - x).
  const ModelParams ou{2.0, 0.0, 0.1, 1.0};
  const auto ou_beta = drift_field(family, 0, ou, InteractionKernel::linear_difference(), grid);
  for (std::size_t i = 0; i < grid.nx; ++i) {
    REQUIRE(ou_beta[i] == doctest::Approx(2.0 * (0.5 - grid.center(i))).epsilon(1e-12).scale(1.0));
  }
  // Neighbor value: alpha lambda m + omega (b - x).
  const ModelParams nv{1.0, 0.1, 0.1, 2.0};
  const auto nv_beta = drift_field(family, 0, nv, InteractionKernel::neighbor_value(), grid);
  const auto nv_quad = drift_field(family, 0, nv, InteractionKernel::neighbor_value(), grid, true);
  for (std::size_t i = 0; i < grid.nx; ++i) {
    REQUIRE(nv_beta[i] == doctest::Approx(0.2 * m + (0.5 - grid.center(i))).epsilon(1e-12).scale(1.0));
    REQUIRE(nv_quad[i] == doctest::Approx(nv_beta[i]).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("drift field at the origin for the upper atom") {
  const Grid1D grid{-15.0, 15.0, 1200};
  const auto family = BFamilyDensity::dirac_initial(kTwoAtoms, grid);
  const auto beta = drift_field(family, 1, kFig, InteractionKernel::linear_difference(), grid);
  // Cell 600 is centred at dx / 2; the field there is 0.1 - 0.03 x.
  CHECK(beta[600] == doctest::Approx(0.1 - 0.03 * grid.center(600)).epsilon(1e-12));
  CHECK(std::fabs(beta[600] - 0.1) < 1e-3);
}

TEST_CASE("aggregate examples") {
  const Grid1D grid{-1.0, 1.0, 40};
  const auto one = BFamilyDensity::dirac_initial(InitialDistribution::atoms({{0.3, 1.0}}), grid);
  const auto agg = aggregate(one);
  CHECK(std::equal(agg.begin(), agg.end(), one.row(0).begin()));
  BFamilyDensity twin({{-0.2, 0.5}, {0.4, 0.5}}, grid.nx);
  for (std::size_t i = 0; i < grid.nx; ++i) twin.row(0)[i] = twin.row(1)[i] = 0.5 + 0.01 * static_cast<double>(i);
  const auto same = aggregate(twin);
  for (std::size_t i = 0; i < grid.nx; ++i) CHECK(same[i] == doctest::Approx(twin.row(0)[i]).epsilon(1e-15));
}

TEST_CASE("early rows match an independent McKean-Vlasov particle run") {
  // With a symmetric law m stays 0, so the analytic linear drift is exact.
  const Grid1D grid{-15.0, 15.0, 1200};
  const double t = 5.0;
  PdeConfig cfg;
  cfg.scheme = PdeScheme::UpwindVanLeer;
  const auto run = evolve(BFamilyDensity::dirac_initial(kTwoAtoms, grid), kFig,
                          InteractionKernel::linear_difference(), grid, cfg, t, {t});
  const auto row = run.snapshots.back().family.row(1);
  const auto upper = InitialDistribution::atoms({{grid.center(grid.nearest_cell(10.0)), 1.0}});
  const auto particles = simulate_process(ProcessKind::MckeanVlasov, kFig, InteractionKernel::linear_difference(),
                                          upper, SimConfig{0.01, t}, 10000, SeededStream(3, 0),
                                          MeanFieldDrift::analytic_linear(0.0));
  CHECK(wasserstein1_vs_density(EmpiricalMeasure(particles.x), row, grid) < grid.dx());
  // The row drifts toward omega b / (alpha + omega) = 10/3.
  CHECK(density_mean(row, grid) < upper.mean());
  CHECK(count_modes(row) == 1);
}

TEST_CASE("a heat step conserves mass") {
  const Grid1D grid{-5.0, 5.0, 200};
  const auto family = BFamilyDensity::dirac_initial(InitialDistribution::atoms({{0.0, 1.0}}), grid);
  FpStepInfo info;
  const auto next = fp_step(family, ModelParams{0.0, 0.0, 1.0, 1.0}, InteractionKernel::linear_difference(),
                            grid, PdeConfig{}, 0.0, &info);
  CHECK(density_mass(next.row(0), grid) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(info.max_mass_change < 1e-14);
  CHECK(info.min_value >= 0.0);
  CHECK(next.t == doctest::Approx(info.dt));
  CHECK(info.dt <= 0.4 * grid.dx() * grid.dx() + 1e-15);
}

TEST_CASE("OU transition density matches the Gaussian solution") {
  const Grid1D grid{-5.0, 5.0, 400};
  const ModelParams p{1.0, 0.0, 1.0, 1.0};
  const double b = 0.8;
  const auto family = BFamilyDensity::dirac_initial(InitialDistribution::atoms({{b, 1.0}}), grid);
  const std::vector<double> times{1.0, 5.0, 10.0};
  for (const PdeScheme scheme : {PdeScheme::UpwindCentered, PdeScheme::UpwindVanLeer}) {
    PdeConfig cfg;
    cfg.scheme = scheme;
    const auto run = evolve(family, p, InteractionKernel::linear_difference(), grid, cfg, 10.0, times);
    REQUIRE(run.snapshots.size() == 3);
    for (const auto& snap : run.snapshots) {
      const double var = (1.0 - std::exp(-2.0 * snap.t)) / 2.0;
      const auto exact = gaussian_on_grid(grid.center(grid.nearest_cell(b)), var, grid);
      CHECK(wasserstein1_densities(snap.family.row(0), exact, grid) < 2.0 * grid.dx());
    }
    CHECK(variance_of(run.snapshots.back().family.row(0), grid) == doctest::Approx(0.5).epsilon(0.02));
  }
}

TEST_CASE("OU long-time variance") {
  const Grid1D grid{-1.0, 1.0, 400};
  const ModelParams p{1.0, 0.0, std::sqrt(0.02), 1.0};
  const auto family = BFamilyDensity::dirac_initial(InitialDistribution::atoms({{0.0, 1.0}}), grid);
  const auto run = evolve(family, p, InteractionKernel::linear_difference(), grid, PdeConfig{}, 20.0, {20.0});
  CHECK(variance_of(run.snapshots.back().family.row(0), grid) == doctest::Approx(0.01).epsilon(0.02));
}

TEST_CASE("record times") {
  const Grid1D grid{-15.0, 15.0, 600};
  const auto family = BFamilyDensity::dirac_initial(kTwoAtoms, grid);
  const auto run = evolve(family, kFig, InteractionKernel::linear_difference(), grid, PdeConfig{}, 5.0, {0.0});
  REQUIRE(run.snapshots.size() == 1);
  CHECK(run.snapshots[0].t == 0.0);
  for (std::size_t k = 0; k < 2; ++k) {
    const auto a = run.snapshots[0].family.row(k);
    const auto b = family.row(k);
    CHECK(std::equal(a.begin(), a.end(), b.begin()));
  }
  const auto landed = evolve(family, kFig, InteractionKernel::linear_difference(), grid, PdeConfig{}, 5.0,
                             {4.0, 1.3, 99.0});
  REQUIRE(landed.snapshots.size() == 2);
  CHECK(landed.snapshots[0].t == 1.3);
  CHECK(landed.snapshots[1].t == 4.0);
}

TEST_CASE("two-atom evolution conserves mass, stays positive and stays mirror-symmetric") {
  const Grid1D grid{-15.0, 15.0, 1200};
  const auto family = BFamilyDensity::dirac_initial(kTwoAtoms, grid);
  for (const PdeScheme scheme : {PdeScheme::UpwindCentered, PdeScheme::UpwindVanLeer}) {
    PdeConfig cfg;
    cfg.scheme = scheme;
    const auto run = evolve(family, kFig, InteractionKernel::linear_difference(), grid, cfg, 50.0, {25.0, 50.0});
    const auto& d = run.diagnostics;
    CHECK(d.max_step_mass_change < 1e-12);
    CHECK(d.max_row_mass_drift < 1e-8);
    // Round-off may leave values of order 1e-160 below zero, never more.
    CHECK(d.min_value > -1e-14);
    CHECK(d.max_second_moment <= 2.0 * d.initial_second_moment);
    for (const auto& snap : run.snapshots) {
      const auto agg = aggregate(snap.family);
      CHECK(mirror_gap(agg) < 1e-6);
      CHECK(std::fabs(density_mean(agg, grid)) < 1e-3);
    }
  }
}

TEST_CASE("limited reconstruction tracks the exact row variance where upwind does not") {
  // With m = 0 each row is OU with rate r = alpha lambda + omega.
  const Grid1D grid{-15.0, 15.0, 1200};
  const auto family = BFamilyDensity::dirac_initial(kTwoAtoms, grid);
  const double r = kFig.coupling() + kFig.omega;
  const double t = 50.0;
  const double exact_var = kFig.sigma * kFig.sigma * (1.0 - std::exp(-2.0 * r * t)) / (2.0 * r);
  const double b = grid.center(grid.nearest_cell(10.0));
  const double exact_mean = b * (kFig.omega / r) + (b - b * kFig.omega / r) * std::exp(-r * t);

  PdeConfig limited;
  limited.scheme = PdeScheme::UpwindVanLeer;
  const auto lim = evolve(family, kFig, InteractionKernel::linear_difference(), grid, limited, t, {t});
  const auto up = evolve(family, kFig, InteractionKernel::linear_difference(), grid, PdeConfig{}, t, {t});
  const auto lim_row = lim.snapshots.back().family.row(1);
  const auto up_row = up.snapshots.back().family.row(1);
  CHECK(variance_of(lim_row, grid) == doctest::Approx(exact_var).epsilon(0.15));
  CHECK(variance_of(up_row, grid) > 2.0 * exact_var);
  CHECK(density_mean(lim_row, grid) == doctest::Approx(exact_mean).epsilon(grid.dx()));
  CHECK(density_mean(up_row, grid) == doctest::Approx(exact_mean).epsilon(grid.dx()));
}

TEST_CASE("long-time profile is bimodal with interaction and unimodal without reversion") {
  const Grid1D grid{-15.0, 15.0, 1200};
  const auto family = BFamilyDensity::dirac_initial(kTwoAtoms, grid);
  const auto fig3 = evolve(family, kFig, InteractionKernel::linear_difference(), grid, PdeConfig{}, 200.0, {200.0});
  const auto agg3 = aggregate(fig3.snapshots.back().family);
  const auto modes = mode_cells(agg3);
  REQUIRE(modes.size() == 2);
  CHECK(std::fabs(grid.center(modes[0]) + 10.0 / 3.0) < 0.05);
  CHECK(std::fabs(grid.center(modes[1]) - 10.0 / 3.0) < 0.05);

  ModelParams no_reversion = kFig;
  no_reversion.omega = 0.0;
  const auto fig2 = evolve(family, no_reversion, InteractionKernel::linear_difference(), grid, PdeConfig{}, 500.0, {500.0});
  const auto agg2 = aggregate(fig2.snapshots.back().family);
  REQUIRE(count_modes(agg2) == 1);
  CHECK(std::fabs(density_mean(agg2, grid)) < 1e-9);
}

TEST_CASE("steady mixture examples") {
  const Grid1D grid{-15.0, 15.0, 3000};
  const auto mix = steady_state_mixture(kFig, kTwoAtoms, 0.0, grid);
  CHECK(density_mass(mix, grid) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(steady_component_mean(kFig, 0.0, 10.0) == doctest::Approx(10.0 / 3.0).epsilon(1e-14));
  CHECK(std::sqrt(steady_component_variance(kFig, SteadyForm::FpConsistent)) == doctest::Approx(0.0816).epsilon(1e-3));
  CHECK(steady_component_variance(kFig, SteadyForm::SquaredRate) ==
        doctest::Approx(0.0004 / (2.0 * 0.03 * 0.03)).epsilon(1e-12));

  const auto comp = steady_state_component(kFig, 0.0, 10.0, grid);
  CHECK(density_mean(comp, grid) == doctest::Approx(10.0 / 3.0).epsilon(1e-6));
  CHECK(std::sqrt(variance_of(comp, grid)) == doctest::Approx(0.0816).epsilon(1e-2));
  const auto modes = mode_cells(mix);
  REQUIRE(modes.size() == 2);
  CHECK(std::fabs(grid.center(modes[1]) - 10.0 / 3.0) <= grid.dx());

  ModelParams no_reversion = kFig;
  no_reversion.omega = 0.0;
  const auto single = steady_state_mixture(no_reversion, kTwoAtoms, 0.0, grid);
  CHECK(count_modes(single) == 1);
  CHECK(density_mean(single, grid) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

  CHECK(code_of([] { steady_component_mean(ModelParams{0.0, 0.0, 0.1, 1.0}, 0.0, 1.0); }) ==
        ErrorCode::DegenerateParams);
}

TEST_CASE("contraction map examples") {
  const auto same = dirac_contraction_map(ModelParams{0.5, 0.0, 0.0, 1.0}, kTwoAtoms, 0.0);
  CHECK(same == kTwoAtoms);
  const auto collapsed = dirac_contraction_map(ModelParams{0.0, 0.3, 0.0, 1.0}, kTwoAtoms, 1.5);
  for (const auto& a : collapsed.atom_list()) CHECK(a.location == doctest::Approx(1.5));
  const auto fig = dirac_contraction_map(kFig, kTwoAtoms, 0.0);
  CHECK(fig.atom_list()[1].location == doctest::Approx(10.0 / 3.0));
  CHECK(fig.atom_list()[1].weight == 0.5);
}

TEST_CASE("mode detection") {
  CHECK(count_modes(std::vector<double>{0, 1, 0, 1, 0}) == 2);
  CHECK(count_modes(std::vector<double>{0, 1, 1, 1, 0}) == 1);
  CHECK(count_modes(std::vector<double>{0, 1, 0, 0.005, 0}) == 1);
  CHECK(count_modes(std::vector<double>{0, 0, 0}) == 0);
}

TEST_CASE("slant mean examples") {
  const ModelParams p{0.02, 0.01, 0.02, 1.0};
  CHECK(slant_mean(0.0, p, 1.0) == 1.0);
  const ModelParams no_reversion{0.0, 0.01, 0.02, 1.0};
  CHECK(slant_mean(30.0, no_reversion, 0.7) == doctest::Approx(0.7 * std::exp(0.3)).epsilon(1e-14));
  const ModelParams balanced{0.01, 0.01, 0.02, 1.0};
  CHECK(slant_mean(10.0, balanced, 2.0) == doctest::Approx(2.0 * 1.1).epsilon(1e-14));

  CHECK(slant_mean_limit(p, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(slant_mean_limit_coupling_ratio(p, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::fabs(slant_mean(2000.0, p, 1.0) - 2.0) < 1e-6);
  // The approach is exp(-(omega - a) t): at t = 1000 the gap is still e^-10.
  CHECK(2.0 - slant_mean(1000.0, p, 1.0) == doctest::Approx(std::exp(-10.0)).epsilon(1e-9));

  const auto rk = integrate_slant_mean_rk4(p, 1.0, {0.0, 10.0, 1000.0}, 0.01);
  REQUIRE(rk.size() == 3);
  CHECK(rk[0].m == 1.0);
  for (const auto& pt : rk) CHECK(std::fabs(pt.m - slant_mean(pt.t, p, 1.0)) < 1e-9);

  CHECK_THROWS_AS(slant_mean_limit(ModelParams{0.01, 0.01, 0.0, 1.0}, 1.0), Error);
}

TEST_CASE("slant steady state matches a long neighbor-value PDE run") {
  const ModelParams p{0.02, 0.01, 0.02, 1.0};
  const auto dist = InitialDistribution::atoms({{1.0, 1.0}});
  const Grid1D grid{-1.0, 5.0, 240};
  const auto steady = steady_state_slant(p, dist, grid);
  CHECK(density_mean(steady, grid) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(variance_of(steady, grid) == doctest::Approx(0.01).epsilon(1e-2));

  const auto run = evolve(BFamilyDensity::dirac_initial(dist, grid), p, InteractionKernel::neighbor_value(), grid,
                          PdeConfig{}, 1500.0, {1500.0});
  const auto agg = aggregate(run.snapshots.back().family);
  CHECK(density_mean(agg, grid) == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(wasserstein1_densities(agg, steady, grid) < 2.0 * grid.dx());

  const auto pinned = slant_contraction_map(ModelParams{0.02, 0.0, 0.0, 1.0}, kTwoAtoms);
  CHECK(pinned == kTwoAtoms);
  const auto zero = slant_contraction_map(ModelParams{0.02, 0.01, 0.0, 1.0}, InitialDistribution::atoms({{0.0, 1.0}}));
  CHECK(zero.atom_list()[0].location == 0.0);
}

TEST_CASE("mass reaching the domain edge is an error") {
  const Grid1D grid{-3.0, 3.0, 60};
  const auto family = BFamilyDensity::dirac_initial(InitialDistribution::atoms({{2.5, 1.0}}), grid);
  CHECK(code_of([&] {
          evolve(family, ModelParams{0.0, 0.0, 1.0, 1.0}, InteractionKernel::linear_difference(), grid, PdeConfig{},
                 5.0, {5.0});
        }) == ErrorCode::DomainOverflow);
}

TEST_CASE("non-finite densities are rejected") {
  const Grid1D grid{-3.0, 3.0, 60};
  auto family = BFamilyDensity::dirac_initial(InitialDistribution::atoms({{0.0, 1.0}}), grid);
  family.row(0)[10] = std::nan("");
  CHECK(code_of([&] {
          fp_step(family, kFig, InteractionKernel::linear_difference(), grid, PdeConfig{});
        }) == ErrorCode::CflViolation);
  PdeConfig bad;
  bad.cfl_safety = 1.5;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("scheme names round-trip") {
  for (const PdeScheme s : {PdeScheme::UpwindCentered, PdeScheme::UpwindVanLeer}) {
    CHECK(pde_scheme_from_string(to_string(s)) == s);
  }
  for (const SteadyForm f : {SteadyForm::FpConsistent, SteadyForm::SquaredRate}) {
    CHECK(steady_form_from_string(to_string(f)) == f);
  }
  CHECK_THROWS_AS(pde_scheme_from_string("lax_wendroff"), Error);
}
