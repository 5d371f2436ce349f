#pragma once

// Rigid-body dynamics of the head driven by the two flagella: a one-DOF
// pitch model (steering joint about body y) and six-DOF free swimming.

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Geometry>

#include "swimsim/common.hpp"
#include "swimsim/geometry.hpp"
#include "swimsim/head_model.hpp"

namespace swimsim::dynamics {

struct InertiaModel {
  double ix = 0.0;
  double iy = 0.0;
  double iz = 0.0;

  /// Uniform solid cylinder with its axis along body z.
  static InertiaModel solid_cylinder(double mass, double radius, double height);
  void validate() const;
};

/// Everything the integrators need that does not change during a run.
class SwimmerModel {
 public:
  SwimmerModel(geometry::RobotGeometry geometry, head::HeadParams head, InertiaModel inertia);

  /// Default robot with solid-cylinder inertia.
  static SwimmerModel default_model();

  const geometry::RobotGeometry& geometry() const { return geometry_; }
  const head::HeadParams& head() const { return head_; }
  const InertiaModel& inertia() const { return inertia_; }
  double viscosity() const { return head_.viscosity; }
  /// Regularization length of the flagellar segments (1.031 r0 of flagellum 0).
  double regularization() const { return regularization_; }
  /// Body-frame flagella at zero spin angle.
  const std::array<geometry::DiscreteFlagellum, 2>& base_flagella() const { return base_; }

 private:
  geometry::RobotGeometry geometry_;
  head::HeadParams head_;
  InertiaModel inertia_;
  double regularization_;
  std::array<geometry::DiscreteFlagellum, 2> base_;
};

/// Flagella in the inertial frame with nodal velocities populated.
struct FlagellaSnapshot {
  std::array<geometry::DiscreteFlagellum, 2> flagella;
  Mat3 body_to_inertial = Mat3::Identity();
  Vec3 head_position = Vec3::Zero();
};

/// Returns the hydrodynamic force on each flagellum, inertial frame.
using ForceModel = std::function<std::array<Vec3, 2>(const FlagellaSnapshot&)>;

ForceModel rss_force_model(double viscosity, double regularization);
/// Constant body-frame forces, ignoring the flow. Used to check the
/// integrators against closed-form steady states.
ForceModel prescribed_force_model(const Vec3& f1_body, const Vec3& f2_body);

/// Body-frame forces and torques acting on the head at one instant.
struct WrenchSummary {
  Vec3 f_p1 = Vec3::Zero();
  Vec3 f_p2 = Vec3::Zero();
  Vec3 tail_torque = Vec3::Zero();
  Vec3 head_force = Vec3::Zero();
  Vec3 head_torque = Vec3::Zero();
  Vec3 righting_moment = Vec3::Zero();
};

struct PivotState {
  double beta = 0.0;
  double beta_dot = 0.0;
  double t = 0.0;
  std::array<double, 2> spin{};  // accumulated spin angle of each flagellum
};

struct FreeState {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();  // body -> inertial
  Vec3 angular_velocity = Vec3::Zero();                             // body frame
  double t = 0.0;
  std::array<double, 2> spin{};
};

struct PivotStep {
  PivotState state;
  WrenchSummary wrench;  // evaluated at the input state
};

struct FreeStep {
  FreeState state;
  WrenchSummary wrench;
};

FlagellaSnapshot pivot_snapshot(const PivotState& state, const SwimmerModel& model, double omega1, double omega2);
FlagellaSnapshot free_snapshot(const FreeState& state, const SwimmerModel& model, double omega1, double omega2);

WrenchSummary pivot_wrench(const PivotState& state, const SwimmerModel& model, double omega1, double omega2,
                           const ForceModel& forces);

/// One step of I_y beta'' = T_r + T_m + T_tail. Head rotational drag is
/// implicit, everything else explicit (semi-implicit Euler).
PivotStep step_pivot(const PivotState& state, const SwimmerModel& model, double omega1, double omega2, double dt,
                     const ForceModel& forces);

/// One step of the free-swimming equations with RK2 midpoint. The step is
/// split into equal substeps when the head drag rate would make a single
/// midpoint step unstable.
FreeStep step_free(const FreeState& state, const SwimmerModel& model, double omega1, double omega2, double dt,
                   const ForceModel& forces);

/// Number of RK2 substeps step_free uses for a given dt.
int free_substeps(const SwimmerModel& model, double dt);

enum class Mode { pivot, free };

struct SimOptions {
  Mode mode = Mode::pivot;
  double omega1 = 0.0;
  double omega2 = 0.0;
  double t_end = 0.0;
  double dt = 0.01;
  PivotState pivot_initial{};
  FreeState free_initial{};
};

struct PivotRecord {
  PivotState state;
  WrenchSummary wrench;
};

struct FreeRecord {
  FreeState state;
  WrenchSummary wrench;
};

struct Trajectory {
  Mode mode = Mode::pivot;
  std::vector<PivotRecord> pivot;
  std::vector<FreeRecord> free;

  std::size_t size() const { return mode == Mode::pivot ? pivot.size() : free.size(); }
};

/// Fixed-step run from t = 0 to t_end; record k holds the state at k dt and
/// the wrench evaluated there. Step failures are rethrown with their time.
Trajectory run_sim(const SwimmerModel& model, const SimOptions& options, const ForceModel& forces);

/// Revolution-averaged response of the pair spinning at constant speed
/// with the head held fixed. Forces and torque are body frame.
struct PairResponse {
  std::array<Vec3, 2> force{Vec3::Zero(), Vec3::Zero()};
  Vec3 tail_torque = Vec3::Zero();
};

/// Averages over `phases` equally spaced instants of revolution number
/// `start_revolution` (the period is set by the faster flagellum). Stokes
/// flow has no memory, so every revolution gives the same average.
PairResponse steady_rotation_response(const geometry::RobotGeometry& robot, double viscosity, double omega1,
                                      double omega2, int phases, int start_revolution = 1);

/// Revolution-averaged hydrodynamic force on one isolated flagellum mounted
/// like flagellum 0, body frame.
Vec3 isolated_flagellum_force(const geometry::HelixSpec& spec, double discretization, double viscosity,
                              double omega, int phases);

/// Pitch angle of a body orientation: rotation of body z away from inertial z
/// measured about inertial y.
double pitch_angle(const Eigen::Quaterniond& orientation);

}  // namespace swimsim::dynamics
