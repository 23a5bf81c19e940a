#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "pmlcnls/errors.hpp"
#include "pmlcnls/ground_state.hpp"

using namespace pmlcnls;

namespace {

// Townes profile of phi'' + phi'/r - phi + phi^3 = 0, frozen from a tightened
// shooting run (r_max 30, tolerances 1e-14).
constexpr double kTownesPhi0 = 2.2062008646;
constexpr double kTownesPower = 11.7008965;

const CnlsCoefficients& mixed() {
  static const CnlsCoefficients c({1.0, 0.75}, {1.0, 1.0}, {0.2, 0.15}, 0.5, -0.2);
  return c;
}

std::pair<DomainLayout, GridSpec> omega_grid(int cells) {
  return make_aligned_grid({14.0, 14.0, 0.0, 0.0}, cells, cells);
}

}  // namespace

TEST(Shooting, TownesProfile) {
  const auto p = shoot_radial_ground_state(1.0, 0.0);
  EXPECT_NEAR(p.phi0, kTownesPhi0, 1e-8);
  EXPECT_NEAR(p.power, kTownesPower, 1e-5);
  EXPECT_GT(p.r_cut, 5.0);
}

TEST(Shooting, TightenedRunAgrees) {
  ShootingOptions tight;
  tight.r_max = 30.0;
  tight.ode_abs_tol = tight.ode_rel_tol = 1e-14;
  tight.bisection_tol = 1e-15;
  const auto a = shoot_radial_ground_state(1.0, 0.0);
  const auto b = shoot_radial_ground_state(1.0, 0.0, tight);
  EXPECT_NEAR(a.phi0, b.phi0, 1e-9);
  for (double r : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0}) EXPECT_NEAR(a(r), b(r), 1e-7) << r;
}

TEST(Shooting, CubicScaling) {
  // phi_c3(r) = phi_1(r) / sqrt(c3)
  const auto one = shoot_radial_ground_state(1.0, 0.0);
  const auto two = shoot_radial_ground_state(2.0, 0.0);
  EXPECT_NEAR(two.phi0, one.phi0 / std::sqrt(2.0), 1e-8);
  EXPECT_NEAR(two.power, one.power / 2.0, 1e-5);
  for (double r : {0.3, 1.7, 3.5}) EXPECT_NEAR(two(r), one(r) / std::sqrt(2.0), 1e-7);
}

TEST(Shooting, SamplesSatisfyTheOde) {
  const auto p = shoot_radial_ground_state(2.0, -0.1);
  // Fourth-order central differences of the interpolant.
  const double h = 1e-2;
  for (double r : {0.5, 1.0, 2.0, 3.0, 5.0}) {
    const double f0 = p(r), fp = p(r + h), fm = p(r - h), fpp = p(r + 2 * h), fmm = p(r - 2 * h);
    const double d1 = (-fpp + 8 * fp - 8 * fm + fmm) / (12 * h);
    const double d2 = (-fpp + 16 * fp - 30 * f0 + 16 * fm - fmm) / (12 * h * h);
    const double res = d2 + d1 / r - f0 + 2.0 * f0 * f0 * f0 - 0.1 * std::pow(f0, 5);
    EXPECT_LT(std::abs(res), 1e-5) << r;
  }
  for (std::size_t i = 1; i < p.phi.size(); ++i) EXPECT_LE(p.phi[i], p.phi[i - 1] + 1e-14);
}

TEST(Shooting, RejectsNonFocusing) {
  EXPECT_THROW(shoot_radial_ground_state(0.0, 0.0), ConfigError);
  EXPECT_THROW(shoot_radial_ground_state(-1.0, 0.1), ConfigError);
}

TEST(GroundState, RadialStartConvergesUnderRefinement) {
  // alpha = 1, beta = 0, equal components: phi solves the radial equation with
  // c3 = 4 gamma, so the residual is the fourth-order truncation error. The box
  // is wide enough for the Dirichlet cut to stay below it.
  const CnlsCoefficients start({1.0, 1.0}, {1.0, 1.0}, {0.0, 0.0}, 0.5, -0.2);
  const auto p = shoot_radial_ground_state(2.0, -0.1);
  double prev = 0.0;
  for (int cells : {60, 120, 240}) {
    auto [layout, grid] = make_aligned_grid({30.0, 30.0, 0.0, 0.0}, cells, cells);
    const auto gs = ground_state_from_radial(p, start, layout, grid);
    if (prev > 0.0) {
      EXPECT_GT(prev / gs.residual, 10.0) << cells;
    }
    prev = gs.residual;
    EXPECT_NEAR(gs.phi.at(0, cells / 2, cells / 2).real(), p.phi0, 1e-12);
    EXPECT_EQ(gs.phi.at(1, 0, 17), cplx(0.0));
  }
}

TEST(Continuation, ReachesTargetWithQuadraticNewton) {
  auto [layout, grid] = omega_grid(48);
  const auto r = compute_ground_state(mixed(), layout, grid);
  EXPECT_EQ(r.state.coeffs, mixed());
  EXPECT_LT(r.state.residual, 1e-9);
  EXPECT_NEAR(stationary_residual(r.state.phi, mixed()), r.state.residual, 1e-12);
  ASSERT_FALSE(r.history.empty());
  EXPECT_DOUBLE_EQ(r.history.back().s, 1.0);
  for (const auto& rec : r.history) {
    EXPECT_GT(rec.min_value, -1e-8) << rec.s;
    // quadratic: once below 1e-2 every update squares the residual up to a constant
    const auto& res = rec.residuals;
    for (std::size_t k = 1; k < res.size(); ++k) {
      if (res[k - 1] < 1e-2 && res[k] > 1e-11) {
        EXPECT_LT(res[k], 50.0 * res[k - 1] * res[k - 1]) << rec.s << " " << k;
      }
    }
  }
}

TEST(Continuation, SolutionIsRealAndPositiveInside) {
  auto [layout, grid] = omega_grid(48);
  const auto gs = compute_ground_state(mixed(), layout, grid).state;
  for (int j = 0; j < 2; ++j) {
    for (int ix = 1; ix < grid.nx - 1; ++ix) {
      for (int iy = 1; iy < grid.ny - 1; ++iy) {
        EXPECT_EQ(gs.phi.at(j, ix, iy).imag(), 0.0);
        EXPECT_GT(gs.phi.at(j, ix, iy).real(), 0.0);
      }
    }
  }
}

TEST(Continuation, SwappedAxesGiveTransposedState) {
  // (alpha_x, alpha_y) -> (alpha_y, alpha_x) with the same beta is the reflection x <-> y.
  const CnlsCoefficients a({0.75, 1.25}, {1.25, 0.75}, {0.0, 0.0}, 0.5, -0.2);
  const CnlsCoefficients b({1.25, 0.75}, {0.75, 1.25}, {0.0, 0.0}, 0.5, -0.2);
  auto [layout, grid] = omega_grid(40);
  const auto ga = compute_ground_state(a, layout, grid).state;
  const auto gb = compute_ground_state(b, layout, grid).state;
  double m = 0.0;
  for (int j = 0; j < 2; ++j) {
    for (int ix = 0; ix < grid.nx; ++ix) {
      for (int iy = 0; iy < grid.ny; ++iy) {
        m = std::max(m, std::abs(ga.phi.at(j, ix, iy) - gb.phi.at(j, iy, ix)));
      }
    }
  }
  EXPECT_LT(m, 1e-8);
}

TEST(Continuation, StepsAndIdentity) {
  auto [layout, grid] = omega_grid(40);
  const auto start = compute_ground_state(mixed(), layout, grid).state;
  ContinuationOptions none;
  none.steps = 0;
  const CnlsCoefficients plain({1, 1}, {1, 1}, {0, 0}, 0.5, -0.2);
  const auto other = CnlsCoefficients::interpolate(mixed(), plain, 0.5);
  EXPECT_THROW(continue_ground_state(start, other, none), ConfigError);
  const auto same = continue_ground_state(start, mixed(), none);
  EXPECT_EQ(same.state.coeffs, mixed());
  EXPECT_LT(same.state.residual, 1e-9);
}
