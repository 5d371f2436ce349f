#include "swimsim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Geometry>

namespace swimsim {

const char* version() noexcept { return SWIMSIM_VERSION_STRING; }

}  // namespace swimsim

namespace swimsim::geometry {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw InvalidArgument(std::string(name) + " must be positive and finite, got " + std::to_string(value));
  }
}

}  // namespace

double HelixSpec::contour_per_turn() const {
  const double circumference = 2.0 * kPi * radius;
  return std::sqrt(circumference * circumference + pitch * pitch);
}

double HelixSpec::contour_length() const { return axial_length / pitch * contour_per_turn(); }

Vec3 HelixSpec::curve(double s) const {
  const double turn = contour_per_turn();
  const double theta = 2.0 * kPi * s / turn;
  const double sign = handedness == Handedness::right ? 1.0 : -1.0;
  const Vec3 base(radius * std::cos(theta), sign * radius * std::sin(theta), pitch * s / turn);
  return Eigen::AngleAxisd(phase, Vec3::UnitZ()) * base;
}

void HelixSpec::validate() const {
  require_positive(radius, "helix radius R");
  require_positive(pitch, "helix pitch lambda");
  require_positive(axial_length, "axial length l");
  require_positive(cross_section_radius, "cross-section radius r0");
  if (cross_section_radius >= radius) {
    throw InvalidArgument("cross-section radius r0 must be smaller than helix radius R");
  }
  if (!std::isfinite(phase) || !std::isfinite(angular_speed) || !origin.allFinite()) {
    throw InvalidArgument("helix phase, angular speed and origin must be finite");
  }
}

std::vector<Vec3> DiscreteFlagellum::edges() const {
  std::vector<Vec3> out;
  out.reserve(segment_count());
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) out.push_back(nodes[i + 1] - nodes[i]);
  return out;
}

Vec3 RobotGeometry::attachment(std::size_t i) const {
  const double side = i == 0 ? 1.0 : -1.0;
  return Vec3(side * 0.5 * spacing, 0.0, 0.0);
}

void RobotGeometry::validate() const {
  require_positive(head_radius, "head radius r_h");
  require_positive(head_height, "head height h");
  require_positive(spacing, "flagella spacing d");
  require_positive(head_mass, "head mass m_h");
  require_positive(discretization, "discretization length dl");
  if (!(com_shift >= 0.0) || !std::isfinite(com_shift)) {
    throw InvalidArgument("COM shift r_m must be non-negative");
  }
  for (const auto& f : flagella) f.validate();
}

RobotGeometry default_robot() { return RobotGeometry{}; }

RobotGeometry symmetric_robot() {
  RobotGeometry robot;
  robot.flagella[1].phase = kPi;
  return robot;
}

DiscreteFlagellum discretize_helix(const HelixSpec& spec, double spacing) {
  spec.validate();
  require_positive(spacing, "discretization length dl");
  if (spacing >= spec.axial_length) {
    throw InvalidArgument("discretization length dl must be smaller than the axial length l");
  }

  const double contour = spec.contour_length();
  const auto n = std::max<std::size_t>(8, static_cast<std::size_t>(std::llround(contour / spacing)));

  DiscreteFlagellum flag;
  flag.axis_point = spec.origin;
  flag.axis_dir = Vec3::UnitZ();
  flag.nodes.reserve(n + 1);

  // Connection nodes: the attachment point and one spacing down the axis.
  const Vec3 base = spec.origin + Vec3(0.0, 0.0, spacing);
  flag.nodes.push_back(spec.origin);
  flag.nodes.push_back(base);
  for (std::size_t i = 2; i <= n; ++i) {
    const double s = static_cast<double>(i - 2) * contour / static_cast<double>(n - 2);
    flag.nodes.push_back(base + spec.curve(s));
  }
  flag.velocities.assign(flag.nodes.size(), Vec3::Zero());
  return flag;
}

std::vector<Vec3> rigid_rotation_velocities(const DiscreteFlagellum& flag, const Vec3& omega,
                                            const Vec3& axis_point) {
  std::vector<Vec3> out;
  out.reserve(flag.nodes.size());
  for (const auto& x : flag.nodes) out.push_back(omega.cross(x - axis_point));
  return out;
}

DiscreteFlagellum rotate_about_axis(const DiscreteFlagellum& flag, double angle) {
  const Mat3 rot = Eigen::AngleAxisd(angle, flag.axis_dir).toRotationMatrix();
  DiscreteFlagellum out = flag;
  for (std::size_t i = 0; i < out.nodes.size(); ++i) {
    out.nodes[i] = flag.axis_point + rot * (flag.nodes[i] - flag.axis_point);
  }
  for (auto& v : out.velocities) v = rot * v;
  return out;
}

DiscreteFlagellum advance_flagellum(const DiscreteFlagellum& flag, double omega_z, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  if (omega_z == 0.0) return flag;
  return rotate_about_axis(flag, omega_z * dt);
}

DiscreteFlagellum transformed(const DiscreteFlagellum& flag, const Mat3& rotation, const Vec3& translation) {
  DiscreteFlagellum out;
  out.nodes.reserve(flag.nodes.size());
  for (const auto& x : flag.nodes) out.nodes.push_back(rotation * x + translation);
  out.velocities.reserve(flag.velocities.size());
  for (const auto& v : flag.velocities) out.velocities.push_back(rotation * v);
  out.axis_point = rotation * flag.axis_point + translation;
  out.axis_dir = rotation * flag.axis_dir;
  return out;
}

Mat3 mount_rotation() { return Vec3(1.0, -1.0, -1.0).asDiagonal(); }

std::array<DiscreteFlagellum, 2> mount_flagella(const RobotGeometry& robot) {
  robot.validate();
  std::array<DiscreteFlagellum, 2> out;
  for (std::size_t i = 0; i < 2; ++i) {
    HelixSpec local = robot.flagella[i];
    local.origin = Vec3::Zero();
    out[i] = transformed(discretize_helix(local, robot.discretization), mount_rotation(), robot.attachment(i));
  }
  return out;
}

Eigen::VectorXd stack(std::span<const Vec3> vectors) {
  Eigen::VectorXd out(3 * static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) out.segment<3>(3 * static_cast<Eigen::Index>(i)) = vectors[i];
  return out;
}

}  // namespace swimsim::geometry
