#pragma once

// Regularized Stokeslet Segments: a regularized Stokeslet integrated
// analytically along straight segments, with forces interpolated linearly
// between the segment end nodes.

#include <cstddef>
#include <span>
#include <vector>

#include "swimsim/common.hpp"
#include "swimsim/geometry.hpp"

namespace swimsim::rss {

/// Regularization length used for a filament of cross-section radius r0.
inline double regularization_for(double cross_section_radius) { return 1.031 * cross_section_radius; }

/// Moments T_{p,q} = integral over alpha in [0,1] of alpha^p R(alpha)^q, where
/// R(alpha) = sqrt(|x_m - x_k - alpha (x_{k+1} - x_k)|^2 + c^2).
struct TScalars {
  double t0m1 = 0.0;
  double t0m3 = 0.0;
  double t1m1 = 0.0;
  double t1m3 = 0.0;
  double t2m3 = 0.0;
  double t3m3 = 0.0;
};

TScalars t_scalars(const Vec3& xk, const Vec3& xk1, const Vec3& xm, double c);

/// Velocity contribution at x_m of one segment, without the 1/(8 pi mu) factor:
/// 8 pi mu u(x_m) = a1 * f_k + a2 * f_{k+1}.
struct SegmentBlocks {
  Mat3 a1 = Mat3::Zero();
  Mat3 a2 = Mat3::Zero();
};

SegmentBlocks segment_blocks(const Vec3& xk, const Vec3& xk1, const Vec3& xm, double c);

/// Dense mobility system U = A F for a set of flagella. F holds the nodal
/// values of the force per unit length applied by the filament on the fluid;
/// the fluid acts on the filament with -F. Between nodes the density is
/// linear, so resultants are trapezoid-weighted sums.
class MobilitySystem {
 public:
  MobilitySystem(Eigen::MatrixXd matrix, std::vector<Vec3> nodes, std::vector<std::size_t> offsets,
                 double regularization, double viscosity);

  const Eigen::MatrixXd& matrix() const { return matrix_; }
  std::span<const Vec3> nodes() const { return nodes_; }
  std::size_t node_count() const { return nodes_.size(); }
  /// Index of the first node of each flagellum; the last entry is node_count().
  std::span<const std::size_t> offsets() const { return offsets_; }
  double regularization() const { return regularization_; }
  double viscosity() const { return viscosity_; }

 private:
  Eigen::MatrixXd matrix_;
  std::vector<Vec3> nodes_;
  std::vector<std::size_t> offsets_;
  double regularization_;
  double viscosity_;
};

MobilitySystem assemble_mobility(std::span<const geometry::DiscreteFlagellum> flagella, double viscosity,
                                 double regularization);

struct NodalForceSet {
  Eigen::VectorXd stacked;  // 3 entries per node, force density on the fluid, N/m

  std::size_t node_count() const { return static_cast<std::size_t>(stacked.size() / 3); }
  Vec3 at(std::size_t node) const { return stacked.segment<3>(3 * static_cast<Eigen::Index>(node)); }
};

/// Dense LU solve of A F = U. Throws NumericalError when the condition
/// estimate exceeds 1e12 or the relative residual exceeds 1e-9.
NodalForceSet solve_forces(const MobilitySystem& system, const Eigen::VectorXd& velocities);

struct Wrench {
  Vec3 force = Vec3::Zero();
  Vec3 torque = Vec3::Zero();
};

/// Arclength carried by each node under linear interpolation: half of each
/// adjacent segment length.
std::vector<double> node_weights(std::span<const Vec3> nodes);

/// Hydrodynamic reaction on flagellum `flagellum` of the system: the force is
/// minus the integral of the force density, and the torque is that force
/// applied at `attachment`, taken about `head`.
Wrench resultant_wrench(const NodalForceSet& forces, const MobilitySystem& system, std::size_t flagellum,
                        const Vec3& attachment, const Vec3& head = Vec3::Zero());

/// Convenience: assemble, solve, and return one resultant per flagellum.
/// Each flagellum's velocities must already be populated.
std::vector<Wrench> flagella_wrenches(std::span<const geometry::DiscreteFlagellum> flagella, double viscosity,
                                      double regularization, const Vec3& head = Vec3::Zero());

}  // namespace swimsim::rss
