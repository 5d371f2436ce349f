#pragma once

// Open-loop attitude control of the pivoting robot: linearized pitch plant,
// its steady state, and the flagella speeds that hold a reference pitch.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "swimsim/common.hpp"
#include "swimsim/dynamics.hpp"
#include "swimsim/geometry.hpp"
#include "swimsim/head_model.hpp"

namespace swimsim::control {

/// x' = A x + B u with x = (beta, beta'), u = (f1, f2) the axial thrusts of
/// the two flagella. Linearized with sin(beta) ~ beta.
struct LinearPlant {
  Eigen::Matrix2d state = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d input = Eigen::Matrix2d::Zero();
  bool small_angle = true;

  Eigen::Vector2cd eigenvalues() const;
  /// Both eigenvalues in the open left half-plane.
  bool stable() const;
};

LinearPlant build_plant(const geometry::RobotGeometry& robot, const head::HeadParams& head,
                        const dynamics::InertiaModel& inertia);

struct SteadyState {
  double beta = 0.0;      // small-angle value (f1 - f2) d / (2 m g r_m)
  double beta_dot = 0.0;
  /// Solution of m g r_m sin(beta) = (f1 - f2) d / 2; NaN when no solution exists.
  double beta_sin_corrected = 0.0;
};

SteadyState steady_state(const LinearPlant& plant, double f1, double f2, const head::HeadParams& head,
                         double spacing);

/// Linear thrust maps f_i = K_i omega_i, fitted through the origin.
struct PropulsionCalibration {
  double k1 = 0.0;
  double k2 = 0.0;
  double residual = 0.0;  // relative RMS misfit of the linear model
  std::vector<double> omegas;
  std::vector<double> thrust1;
  std::vector<double> thrust2;
};

/// Runs the counter-rotating pair (omega1 = w, omega2 = -w) at every speed of
/// the grid and fits each flagellum's thrust against its own speed. Residuals
/// above 5% are reported on stderr.
PropulsionCalibration calibrate_propulsion(const geometry::RobotGeometry& robot, double viscosity,
                                           std::span<const double> omega_grid, int phases = 16);

/// Thrust limit K omega_max, using the weaker of the two flagella.
double default_force_limit(const PropulsionCalibration& cal, double omega_max = 30.0);

struct SpeedSolution {
  double omega1 = 0.0;
  double omega2 = 0.0;
  double thrust1 = 0.0;
  double thrust2 = 0.0;
  double beta_max = 0.0;  // largest reference reachable within the thrust limit
};

/// Reference infeasible under the thrust limit.
class InfeasibleReference : public NumericalError {
 public:
  InfeasibleReference(const std::string& what, double max_beta) : NumericalError(what), max_beta_(max_beta) {}
  double max_beta() const { return max_beta_; }

 private:
  double max_beta_;
};

/// Speeds with f1 + f2 = 0 and (f1 - f2) d / (2 m g r_m) = beta_ref.
SpeedSolution solve_speeds(double beta_ref, const PropulsionCalibration& cal, const head::HeadParams& head,
                           double spacing, double force_limit);

}  // namespace swimsim::control
