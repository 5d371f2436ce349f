#include <doctest.h>

#include <cmath>
#include <random>

#include "swimsim/control.hpp"

using namespace swimsim;
using namespace swimsim::control;

namespace {

PropulsionCalibration symmetric_calibration(double k) {
  PropulsionCalibration cal;
  cal.k1 = k;
  cal.k2 = -k;
  return cal;
}

}  // namespace

TEST_CASE("plant entries") {
  const auto robot = geometry::default_robot();
  const head::HeadParams head;
  const auto inertia = dynamics::InertiaModel::solid_cylinder(head.mass, head.radius, head.height);
  const LinearPlant p = build_plant(robot, head, inertia);
  CHECK(p.state(0, 0) == 0.0);
  CHECK(p.state(0, 1) == 1.0);
  CHECK(p.state(1, 0) == doctest::Approx(-(0.1 * 9.8 * 0.002) / inertia.iy));
  CHECK(p.state(1, 1) == doctest::Approx(-8 * kPi * 2.3 * 1.0 * std::pow(0.043, 3) / inertia.iy));
  CHECK(p.input.row(0).isZero());
  CHECK(p.input(1, 0) == doctest::Approx(0.022 / (2 * inertia.iy)));
  CHECK(p.input(1, 1) == doctest::Approx(-0.022 / (2 * inertia.iy)));
  CHECK(p.stable());
  const Eigen::Vector2cd ev = p.eigenvalues();
  CHECK(ev[0].real() < 0.0);
  CHECK(ev[1].real() < 0.0);
  // characteristic polynomial s^2 + (c / I) s + m g r_m / I
  CHECK((ev[0] * ev[1]).real() == doctest::Approx(0.1 * 9.8 * 0.002 / inertia.iy));
  CHECK((ev[0] + ev[1]).real() == doctest::Approx(-8 * kPi * 2.3 * std::pow(0.043, 3) / inertia.iy));
  CHECK(p.small_angle);
}

TEST_CASE("no righting moment leaves a zero eigenvalue") {
  auto robot = geometry::default_robot();
  head::HeadParams head;
  head.com_shift = 0.0;
  const LinearPlant p = build_plant(robot, head, dynamics::InertiaModel::solid_cylinder(0.1, 0.025, 0.043));
  CHECK(p.state(1, 0) == 0.0);
  CHECK_FALSE(p.stable());
  CHECK_THROWS_AS(steady_state(p, 1e-3, -1e-3, head, 0.022), InvalidArgument);
}

TEST_CASE("eigenvalues of a stiff overdamped plant") {
  LinearPlant p;
  p.state << 0.0, 1.0, -1e-6, -1e6;
  const Eigen::Vector2cd ev = p.eigenvalues();
  // roots of s^2 + 1e6 s + 1e-6
  CHECK(ev[0].real() == doctest::Approx(-1e6).epsilon(1e-14));
  CHECK(ev[1].real() == doctest::Approx(-1e-12).epsilon(1e-12));
  CHECK(ev[0].imag() == 0.0);
  CHECK(p.stable());

  p.state << 0.0, 1.0, -4.0, -2.0;
  const Eigen::Vector2cd osc = p.eigenvalues();
  CHECK(osc[0].real() == doctest::Approx(-1.0));
  CHECK(std::abs(osc[0].imag()) == doctest::Approx(std::sqrt(3.0)));
}

TEST_CASE("steady state of the couple") {
  const auto robot = geometry::default_robot();
  const head::HeadParams head;
  const LinearPlant p = build_plant(robot, head, dynamics::InertiaModel::solid_cylinder(0.1, 0.025, 0.043));
  CHECK(steady_state(p, 1e-4, 1e-4, head, 0.022).beta == 0.0);
  const double b1 = steady_state(p, 1e-4, -1e-4, head, 0.022).beta;
  const double b2 = steady_state(p, 2e-4, -2e-4, head, 0.022).beta;
  CHECK(b1 == doctest::Approx(2e-4 * 0.022 / (2 * 0.1 * 9.8 * 0.002)));
  CHECK(b2 == doctest::Approx(2.0 * b1));
  const SteadyState s = steady_state(p, 1e-4, -1e-4, head, 0.022);
  CHECK(s.beta_dot == 0.0);
  CHECK(s.beta_sin_corrected == doctest::Approx(std::asin(b1)));
  // the linear steady state solves A x + B u = 0
  const Eigen::Vector2d x(s.beta, 0.0);
  CHECK((p.state * x + p.input * Eigen::Vector2d(1e-4, -1e-4)).norm() < 1e-12);
  CHECK(std::isnan(steady_state(p, 1.0, -1.0, head, 0.022).beta_sin_corrected));
}

TEST_CASE("random positive plants are stable") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const auto scale = [&](double nominal) { return nominal * std::pow(10.0, u(rng)); };
  for (int i = 0; i < 200; ++i) {
    auto robot = geometry::default_robot();
    robot.spacing = scale(0.022);
    head::HeadParams head;
    head.mass = scale(0.1);
    head.gravity = scale(9.8);
    head.com_shift = scale(0.002);
    head.rotational_coeff = scale(2.3);
    head.viscosity = scale(1.0);
    head.height = scale(0.043);
    const LinearPlant p = build_plant(robot, head, {scale(1e-5), scale(1e-5), scale(1e-5)});
    CHECK(p.state.trace() < 0.0);
    CHECK(p.state.determinant() > 0.0);
    CHECK(p.stable());
  }
}

TEST_CASE("solve speeds") {
  const head::HeadParams head;
  const auto cal = symmetric_calibration(6e-4);
  const double d = 0.022;
  const SpeedSolution zero = solve_speeds(0.0, cal, head, d, 1.0);
  CHECK(zero.omega1 == 0.0);
  CHECK(zero.omega2 == 0.0);

  const double beta = 0.1;
  const SpeedSolution s = solve_speeds(beta, cal, head, d, 1.0);
  CHECK(s.thrust1 + s.thrust2 == doctest::Approx(0.0));
  CHECK((s.thrust1 - s.thrust2) * d / (2 * 0.1 * 9.8 * 0.002) == doctest::Approx(beta));
  CHECK(s.omega1 == doctest::Approx(0.1 * 9.8 * 0.002 * beta / (d * 6e-4)));
  // mirrored calibration: both flagella spin the same way
  CHECK(s.omega2 == doctest::Approx(s.omega1));

  const SpeedSolution neg = solve_speeds(-beta, cal, head, d, 1.0);
  CHECK(neg.omega1 == doctest::Approx(-s.omega1));
  CHECK(neg.omega2 == doctest::Approx(-s.omega2));

  // identical flagella: opposite speeds
  PropulsionCalibration same;
  same.k1 = same.k2 = 6e-4;
  const SpeedSolution opp = solve_speeds(beta, same, head, d, 1.0);
  CHECK(opp.omega2 == doctest::Approx(-opp.omega1));
}

TEST_CASE("round trip through the plant is exact") {
  const auto robot = geometry::default_robot();
  const head::HeadParams head;
  const LinearPlant p = build_plant(robot, head, dynamics::InertiaModel::solid_cylinder(0.1, 0.025, 0.043));
  const auto cal = symmetric_calibration(5.9e-4);
  for (double beta : {-0.3, -0.05, 0.0, 0.02, 0.2, 0.35}) {
    const SpeedSolution s = solve_speeds(beta, cal, head, robot.spacing, 1.0);
    const double f1 = cal.k1 * s.omega1;
    const double f2 = cal.k2 * s.omega2;
    CHECK(steady_state(p, f1, f2, head, robot.spacing).beta == doctest::Approx(beta).epsilon(1e-14));
  }
}

TEST_CASE("infeasible reference reports the reachable pitch") {
  const head::HeadParams head;
  const auto cal = symmetric_calibration(6e-4);
  const double limit = 6e-4 * 30.0;
  try {
    solve_speeds(0.5, cal, head, 0.022, limit);
    FAIL("expected infeasible reference");
  } catch (const InfeasibleReference& e) {
    CHECK(e.max_beta() == doctest::Approx(limit * 0.022 / (0.1 * 9.8 * 0.002)));
  }
  CHECK_THROWS_AS(solve_speeds(0.1, cal, head, 0.022, 0.0), InvalidArgument);
}

TEST_CASE("calibration is linear through the origin") {
  const auto robot = geometry::default_robot();
  const std::vector<double> grid{5.0, 10.0, 20.0};
  const PropulsionCalibration cal = calibrate_propulsion(robot, 1.0, grid, 8);
  CHECK(cal.residual < 1e-10);
  CHECK(cal.k1 > 0.0);
  // identical right-handed flagella: thrust follows each flagellum's own speed
  CHECK(cal.k2 == doctest::Approx(cal.k1).epsilon(0.05));
  CHECK(cal.k1 > 1e-4);
  CHECK(cal.k1 < 1e-3);
  CHECK(default_force_limit(cal, 30.0) == doctest::Approx(30.0 * std::min(cal.k1, cal.k2)));
  CHECK_THROWS_AS(calibrate_propulsion(robot, 1.0, std::vector<double>{1.0, 2.0}, 8), InvalidArgument);
}

TEST_CASE("mirrored second flagellum flips the sign of its slope") {
  auto robot = geometry::default_robot();
  robot.flagella[1].handedness = geometry::Handedness::left;
  robot.flagella[1].phase = kPi;
  const std::vector<double> grid{5.0, 10.0, 20.0};
  const PropulsionCalibration cal = calibrate_propulsion(robot, 1.0, grid, 8);
  CHECK(cal.k1 > 0.0);
  CHECK(cal.k2 == doctest::Approx(-cal.k1).epsilon(1e-10));
}
