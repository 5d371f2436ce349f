#pragma once

#include "swimsim/common.hpp"

namespace swimsim::head {

struct HeadParams {
  double radius = 25e-3;         // r_h
  double height = 43e-3;         // h
  double mass = 0.1;             // m_h
  double com_shift = 2e-3;       // r_m, COM sits this far below the COG
  double translational_coeff = 4.0;  // C_t
  double rotational_coeff = 2.3;     // C_r
  double rotational_reference = 43e-3;  // d_r, equal to h by default
  double gravity = 9.8;
  double viscosity = 1.0;

  void validate() const;
};

/// Scalar c with f = -c v.
double translational_drag_coefficient(const HeadParams& p);
/// Scalar c with T = -c omega.
double rotational_drag_coefficient(const HeadParams& p);

Vec3 head_drag_force(const Vec3& velocity, const HeadParams& p);
Vec3 head_drag_torque(const Vec3& angular_velocity, const HeadParams& p);

/// Restoring moment about the pivot axis, -m g r_m sin(beta).
double righting_moment(double beta, const HeadParams& p);

/// Free-swimming form: torque in the body frame from gravity acting at the
/// COM (offset -r_m along body z) about the COG. `body_to_inertial` maps body
/// vectors to the inertial frame, where gravity points along -z.
Vec3 righting_moment(const Mat3& body_to_inertial, const HeadParams& p);

/// r1 x f1 + r2 x f2 with r1 = +d/2 x_hat and r2 = -d/2 x_hat.
Vec3 tail_torque(const Vec3& f1, const Vec3& f2, double spacing);

}  // namespace swimsim::head
