#pragma once

// Dimensionless thrust/torque and design-space sweeps.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "swimsim/common.hpp"
#include "swimsim/dynamics.hpp"
#include "swimsim/geometry.hpp"

namespace swimsim::sweep {

struct Normalized {
  double force = 0.0;   // F / (mu omega R L)
  double torque = 0.0;  // T / (mu omega R^2 L)
};

/// L is the contour length of one helical turn.
Normalized normalize(double force, double torque, const geometry::HelixSpec& spec, double viscosity, double omega);

enum class LocomotionMode { left_turn, right_turn, up_translate, down_translate, unclassified };

std::string_view to_string(LocomotionMode mode);

/// Expected mode for a pair of speed signs: (+,-) left, (-,+) right,
/// (-,-) up, (+,+) down.
LocomotionMode expected_mode(double omega1, double omega2);

/// Averaged head loading from a short run, body frame.
struct ResponseSummary {
  double net_force_z = 0.0;  // f_p1 + f_p2 along body z, upward positive
  double torque_y = 0.0;     // tail torque about body y; positive turns left
  double spacing = 0.0;
};

ResponseSummary summarize(const dynamics::PairResponse& response, double spacing);

struct Classification {
  LocomotionMode mode = LocomotionMode::unclassified;
  LocomotionMode expected = LocomotionMode::unclassified;
  bool matches = false;
};

/// Compares the net axial force with the force couple 2 |T_y| / d. The larger
/// one decides between translating and turning. Both below `threshold` (N)
/// gives `unclassified`.
Classification classify_mode(double omega1, double omega2, const ResponseSummary& response,
                             double threshold = 1e-12);

struct DimensionlessPoint {
  double lambda_over_l = 0.0;
  double r_over_lambda = 0.0;
  double d_over_r = 0.0;
  double f_bar = 0.0;          // isolated flagellum thrust
  double t_bar = 0.0;          // counter-rotating pair, tail torque about y
  double f_bar_co = 0.0;       // co-rotating pair, mean axial thrust per flagellum
  double f_bar_counter = 0.0;  // counter-rotating pair, mean resultant magnitude per flagellum
  double f_bar_co_magnitude = 0.0;  // co-rotating pair, mean resultant magnitude per flagellum
  bool ok = true;
  std::string error;
};

struct SweepSettings {
  double helix_radius = 6.4e-3;
  double cross_section_radius = 1.58e-3;
  double discretization = 5e-3;
  double viscosity = 1.0;
  double omega = 20.94;
  int phases = 8;
  int threads = 0;  // 0 picks the hardware concurrency
};

struct GridPoint {
  double lambda_over_l = 0.0;
  double r_over_lambda = 0.0;
  double d_over_r = 0.0;
};

/// Robot geometry with R fixed and lambda, l, d derived from the ratios.
geometry::RobotGeometry geometry_for(const GridPoint& point, const SweepSettings& settings);

/// Thrust and torque at one grid point. Throws on numerical failure.
DimensionlessPoint evaluate_point(const GridPoint& point, const SweepSettings& settings);

/// Evaluates every point on a worker pool. Failures are recorded per point
/// and the sweep continues. Output order matches input order.
std::vector<DimensionlessPoint> design_sweep(std::span<const GridPoint> points, const SweepSettings& settings);

/// Full lambda/l x R/lambda grid at fixed d/R, lambda/l varying fastest.
std::vector<GridPoint> pitch_radius_grid(std::span<const double> lambda_over_l, std::span<const double> r_over_lambda,
                                         double d_over_r);
std::vector<GridPoint> spacing_grid(std::span<const double> d_over_r, double lambda_over_l, double r_over_lambda);

std::vector<double> log_space(double lo, double hi, int n);
std::vector<double> lin_space(double lo, double hi, int n);

struct BacteriaPoint {
  std::string_view label;
  double lambda_over_l;
  double r_over_lambda;
};

/// Five bacterial species followed by the robot.
std::span<const BacteriaPoint> bacteria_table();

/// Evaluates every bacteria_table() entry at d = 3R.
std::vector<DimensionlessPoint> bacteria_overlay(const SweepSettings& settings);

}  // namespace swimsim::sweep
