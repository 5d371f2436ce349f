#include "swimsim/head_model.hpp"

#include <cmath>
#include <string>

namespace swimsim::head {

void HeadParams::validate() const {
  const auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument(std::string(name) + " must be positive");
  };
  positive(radius, "head radius r_h");
  positive(height, "head height h");
  positive(mass, "head mass m_h");
  positive(translational_coeff, "C_t");
  positive(rotational_coeff, "C_r");
  positive(rotational_reference, "d_r");
  positive(gravity, "g");
  positive(viscosity, "viscosity mu");
  if (!(com_shift >= 0.0) || !std::isfinite(com_shift)) throw InvalidArgument("COM shift r_m must be non-negative");
}

double translational_drag_coefficient(const HeadParams& p) {
  return p.translational_coeff * 6.0 * kPi * p.viscosity * p.radius;
}

double rotational_drag_coefficient(const HeadParams& p) {
  const double dr = p.rotational_reference;
  return p.rotational_coeff * 8.0 * kPi * p.viscosity * dr * dr * dr;
}

Vec3 head_drag_force(const Vec3& velocity, const HeadParams& p) {
  return -translational_drag_coefficient(p) * velocity;
}

Vec3 head_drag_torque(const Vec3& angular_velocity, const HeadParams& p) {
  return -rotational_drag_coefficient(p) * angular_velocity;
}

double righting_moment(double beta, const HeadParams& p) {
  return -p.mass * p.gravity * p.com_shift * std::sin(beta);
}

Vec3 righting_moment(const Mat3& body_to_inertial, const HeadParams& p) {
  const Vec3 weight_body = body_to_inertial.transpose() * Vec3(0.0, 0.0, -p.mass * p.gravity);
  const Vec3 com_body(0.0, 0.0, -p.com_shift);
  return com_body.cross(weight_body);
}

Vec3 tail_torque(const Vec3& f1, const Vec3& f2, double spacing) {
  const Vec3 r1(0.5 * spacing, 0.0, 0.0);
  return r1.cross(f1) + (-r1).cross(f2);
}

}  // namespace swimsim::head
