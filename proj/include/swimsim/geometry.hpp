#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "swimsim/common.hpp"

namespace swimsim::geometry {

enum class Handedness { right, left };

/// Geometry of one rigid helical flagellum, expressed in its own frame:
/// the rotation axis is +z and the attachment point is `origin`.
struct HelixSpec {
  double radius = 6.36e-3;               // R
  double pitch = 31.8e-3;                // lambda
  double axial_length = 95.4e-3;         // l
  double cross_section_radius = 1.58e-3; // r0
  Handedness handedness = Handedness::right;
  Vec3 origin = Vec3::Zero();
  double phase = 0.0;          // initial rotation about the axis, rad
  double angular_speed = 0.0;  // rad/s, positive = counterclockwise seen from the free end

  /// Contour length of one helical turn, sqrt((2 pi R)^2 + lambda^2).
  double contour_per_turn() const;
  /// Contour length of the whole helix (axial_length / pitch turns).
  double contour_length() const;
  /// Point on the analytic helix at arc parameter s, relative to the helix base.
  Vec3 curve(double s) const;

  void validate() const;
};

/// Discretized flagellum. Nodes 0 and 1 connect to the head and lie on the
/// rotation axis; nodes 2..N sample the analytic helix.
struct DiscreteFlagellum {
  std::vector<Vec3> nodes;
  std::vector<Vec3> velocities;
  Vec3 axis_point = Vec3::Zero();  // attachment point, on the rotation axis
  Vec3 axis_dir = Vec3::UnitZ();   // unit vector from attachment toward the free end

  std::size_t node_count() const { return nodes.size(); }
  std::size_t segment_count() const { return nodes.empty() ? 0 : nodes.size() - 1; }
  std::vector<Vec3> edges() const;
};

struct RobotGeometry {
  double head_radius = 25e-3;  // r_h
  double head_height = 43e-3;  // h
  double spacing = 22e-3;      // d
  double com_shift = 2e-3;     // r_m
  double head_mass = 0.1;      // m_h
  double discretization = 5e-3;  // target inter-node spacing
  std::array<HelixSpec, 2> flagella{};

  /// Attachment of flagellum i (0 or 1) relative to the head node, body frame.
  /// Flagellum 0 sits at +x, flagellum 1 at -x.
  Vec3 attachment(std::size_t i) const;

  void validate() const;
};

/// Default robot: two identical right-handed helices in phase, so the second
/// flagellum is the first translated by -d along x.
RobotGeometry default_robot();

/// Default robot with the second helix turned by half a revolution, making
/// the pair symmetric under a half turn about body z.
RobotGeometry symmetric_robot();

DiscreteFlagellum discretize_helix(const HelixSpec& spec, double spacing);

/// Per-node velocity omega x (x_i - axis_point).
std::vector<Vec3> rigid_rotation_velocities(const DiscreteFlagellum& flag, const Vec3& omega,
                                            const Vec3& axis_point);

/// Exact rigid rotation of the whole flagellum about its own axis.
DiscreteFlagellum rotate_about_axis(const DiscreteFlagellum& flag, double angle);

/// Advances the spin by omega_z * dt. Uses the exact rotation so the helix stays rigid.
DiscreteFlagellum advance_flagellum(const DiscreteFlagellum& flag, double omega_z, double dt);

/// Applies x -> rotation * x + translation to nodes, axis and velocities.
DiscreteFlagellum transformed(const DiscreteFlagellum& flag, const Mat3& rotation,
                              const Vec3& translation);

/// Rotation from a helix frame to the body frame: helices hang below the
/// head, so the helix +z axis maps to body -z (a half turn about x).
Mat3 mount_rotation();

/// Both flagella discretized and mounted in the body frame, head node at the origin.
std::array<DiscreteFlagellum, 2> mount_flagella(const RobotGeometry& robot);

/// Direction from the head toward the free ends of the flagella, body frame.
inline Vec3 outward_axis() { return -Vec3::UnitZ(); }

/// Component of a body-frame force along the outward axis. Positive thrust
/// pushes the head away from the flagella.
inline double axial_thrust(const Vec3& force_body) { return force_body.dot(outward_axis()); }

/// Stacks 3-vectors into a 3N column.
Eigen::VectorXd stack(std::span<const Vec3> vectors);

}  // namespace swimsim::geometry
