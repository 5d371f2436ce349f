#include "swimsim/rss.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <utility>

namespace swimsim::rss {

namespace {

constexpr double kDegenerateLength = 1e-12;
constexpr double kMaxCondition = 1e12;
constexpr double kResidualTolerance = 1e-9;

// Along the segment, x_alpha = r - alpha s with r = x_m - x_k and
// s = x_{k+1} - x_k. p(alpha) = x_alpha . s.
struct SegmentFrame {
  double length;     // |s|
  double length_sq;  // |s|^2
  double r_dot_s;    // b = r . s
  double r_norm_sq;  // |r|^2
  double det;        // |r x s|^2 + |s|^2 c^2, constant along the segment
  double c_sq;

  double root(double alpha) const {  // R(alpha)
    const double xsq = r_norm_sq - 2.0 * alpha * r_dot_s + alpha * alpha * length_sq;
    return std::sqrt(std::max(xsq, 0.0) + c_sq);
  }
  double proj(double alpha) const { return r_dot_s - alpha * length_sq; }

  // log(|s| R - p). For p > 0 the difference cancels, so use the conjugate
  // form (|s|^2 R^2 - p^2) / (|s| R + p) = det / (|s| R + p).
  double log_term(double alpha) const {
    const double big_r = root(alpha);
    const double p = proj(alpha);
    if (p > 0.0) return std::log(det / (length * big_r + p));
    return std::log(length * big_r - p);
  }
};

SegmentFrame make_frame(const Vec3& xk, const Vec3& xk1, const Vec3& xm, double c) {
  const Vec3 s = xk1 - xk;
  const double length = s.norm();
  if (!(length >= kDegenerateLength)) {
    std::ostringstream msg;
    msg << "degenerate segment: length " << length << " m is below " << kDegenerateLength << " m";
    throw NumericalError(msg.str());
  }
  const Vec3 r = xm - xk;
  SegmentFrame f{};
  f.length = length;
  f.length_sq = length * length;
  f.r_dot_s = r.dot(s);
  f.r_norm_sq = r.squaredNorm();
  f.c_sq = c * c;
  f.det = r.cross(s).squaredNorm() + f.length_sq * f.c_sq;
  return f;
}

struct GaussRule {
  std::array<double, 20> nodes{};    // on [0, 1]
  std::array<double, 20> weights{};
};

// Gauss-Legendre nodes by Newton iteration on P_n.
const GaussRule& gauss_rule() {
  static const GaussRule rule = [] {
    GaussRule g;
    constexpr int n = 20;
    for (int i = 0; i < n; ++i) {
      double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = pk;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      g.nodes[i] = 0.5 * (1.0 - x);
      g.weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    return g;
  }();
  return rule;
}

// Short segment far (relative to its length) from the regularized target: the
// recursions cancel badly, but the integrand is smooth, so use quadrature.
TScalars quadrature_moments(const SegmentFrame& f) {
  const GaussRule& g = gauss_rule();
  TScalars t{};
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const double a = g.nodes[i];
    const double inv_r = 1.0 / f.root(a);
    const double inv_r3 = inv_r * inv_r * inv_r;
    const double w = g.weights[i];
    t.t0m1 += w * inv_r;
    t.t1m1 += w * a * inv_r;
    t.t0m3 += w * inv_r3;
    t.t1m3 += w * a * inv_r3;
    t.t2m3 += w * a * a * inv_r3;
    t.t3m3 += w * a * a * a * inv_r3;
  }
  return t;
}

TScalars moments(const SegmentFrame& f) {
  // closest regularized distance to the segment's line
  const double r_min = std::sqrt(f.det) / f.length;
  if (f.length < 0.25 * r_min) return quadrature_moments(f);

  const double r0 = f.root(0.0);
  const double r1 = f.root(1.0);
  const double inv_ssq = 1.0 / f.length_sq;
  const double b = f.r_dot_s;

  TScalars t;
  t.t0m1 = (f.log_term(1.0) - f.log_term(0.0)) / f.length;
  t.t0m3 = -(f.proj(1.0) / r1 - f.proj(0.0) / r0) / f.det;
  t.t1m1 = (r1 - r0) * inv_ssq + b * inv_ssq * t.t0m1;
  t.t1m3 = -(1.0 / r1 - 1.0 / r0) * inv_ssq + b * inv_ssq * t.t0m3;
  t.t2m3 = -(1.0 / r1) * inv_ssq + inv_ssq * t.t0m1 + b * inv_ssq * t.t1m3;
  t.t3m3 = -(1.0 / r1) * inv_ssq + 2.0 * inv_ssq * t.t1m1 + b * inv_ssq * t.t2m3;
  return t;
}

}  // namespace

TScalars t_scalars(const Vec3& xk, const Vec3& xk1, const Vec3& xm, double c) {
  return moments(make_frame(xk, xk1, xm, c));
}

SegmentBlocks segment_blocks(const Vec3& xk, const Vec3& xk1, const Vec3& xm, double c) {
  const SegmentFrame frame = make_frame(xk, xk1, xm, c);
  const TScalars t = moments(frame);
  const Vec3 s = xk1 - xk;
  const Vec3 r = xm - xk;
  const Mat3 rr = r * r.transpose();
  const Mat3 rs = r * s.transpose() + s * r.transpose();
  const Mat3 ss = s * s.transpose();
  const double c_sq = frame.c_sq;

  // Integral of alpha^p times the regularized Stokeslet
  // (1/R + c^2/R^3) I + x_alpha x_alpha^T / R^3.
  const Mat3 zeroth = (t.t0m1 + c_sq * t.t0m3) * Mat3::Identity() + t.t0m3 * rr - t.t1m3 * rs + t.t2m3 * ss;
  const Mat3 first = (t.t1m1 + c_sq * t.t1m3) * Mat3::Identity() + t.t1m3 * rr - t.t2m3 * rs + t.t3m3 * ss;

  SegmentBlocks blocks;
  blocks.a2 = frame.length * first;
  blocks.a1 = frame.length * zeroth - blocks.a2;
  return blocks;
}

MobilitySystem::MobilitySystem(Eigen::MatrixXd matrix, std::vector<Vec3> nodes, std::vector<std::size_t> offsets,
                               double regularization, double viscosity)
    : matrix_(std::move(matrix)),
      nodes_(std::move(nodes)),
      offsets_(std::move(offsets)),
      regularization_(regularization),
      viscosity_(viscosity) {}

MobilitySystem assemble_mobility(std::span<const geometry::DiscreteFlagellum> flagella, double viscosity,
                                 double regularization) {
  if (!(viscosity > 0.0)) throw InvalidArgument("viscosity must be positive");
  if (!(regularization > 0.0)) throw InvalidArgument("regularization length must be positive");

  std::vector<Vec3> nodes;
  std::vector<std::size_t> offsets;
  for (const auto& flag : flagella) {
    if (flag.nodes.size() < 2) throw InvalidArgument("each flagellum needs at least two nodes");
    offsets.push_back(nodes.size());
    nodes.insert(nodes.end(), flag.nodes.begin(), flag.nodes.end());
  }
  offsets.push_back(nodes.size());

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      if ((nodes[i] - nodes[j]).norm() < kDegenerateLength) {
        std::ostringstream msg;
        msg << "coincident nodes " << i << " and " << j << " at (" << nodes[i].transpose() << ")";
        throw NumericalError(msg.str());
      }
    }
  }

  const auto n = static_cast<Eigen::Index>(nodes.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3 * n, 3 * n);
  const double scale = 1.0 / (8.0 * kPi * viscosity);
  for (std::size_t f = 0; f + 1 < offsets.size(); ++f) {
    for (std::size_t k = offsets[f]; k + 1 < offsets[f + 1]; ++k) {
      const auto ck = 3 * static_cast<Eigen::Index>(k);
      for (Eigen::Index m = 0; m < n; ++m) {
        const SegmentBlocks blocks = segment_blocks(nodes[k], nodes[k + 1], nodes[static_cast<std::size_t>(m)],
                                                    regularization);
        a.block<3, 3>(3 * m, ck) += scale * blocks.a1;
        a.block<3, 3>(3 * m, ck + 3) += scale * blocks.a2;
      }
    }
  }
  return MobilitySystem(std::move(a), std::move(nodes), std::move(offsets), regularization, viscosity);
}

NodalForceSet solve_forces(const MobilitySystem& system, const Eigen::VectorXd& velocities) {
  const Eigen::MatrixXd& a = system.matrix();
  if (velocities.size() != a.rows()) {
    std::ostringstream msg;
    msg << "velocity vector has " << velocities.size() << " entries, system expects " << a.rows();
    throw InvalidArgument(msg.str());
  }

  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  const double rcond = lu.rcond();
  if (!(rcond > 1.0 / kMaxCondition)) {
    std::ostringstream msg;
    msg << "mobility matrix is ill-conditioned (condition estimate " << 1.0 / rcond << ")";
    throw NumericalError(msg.str());
  }

  NodalForceSet out;
  out.stacked = lu.solve(velocities);
  // One step of iterative refinement.
  Eigen::VectorXd residual = velocities - a * out.stacked;
  out.stacked += lu.solve(residual);
  residual = velocities - a * out.stacked;

  const double unorm = velocities.norm();
  if (residual.norm() > kResidualTolerance * unorm) {
    std::ostringstream msg;
    msg << "force solve residual " << residual.norm() / unorm << " exceeds " << kResidualTolerance;
    throw NumericalError(msg.str());
  }
  return out;
}

std::vector<double> node_weights(std::span<const Vec3> nodes) {
  std::vector<double> w(nodes.size(), 0.0);
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
    const double half = 0.5 * (nodes[k + 1] - nodes[k]).norm();
    w[k] += half;
    w[k + 1] += half;
  }
  return w;
}

Wrench resultant_wrench(const NodalForceSet& forces, const MobilitySystem& system, std::size_t flagellum,
                        const Vec3& attachment, const Vec3& head) {
  const auto offsets = system.offsets();
  if (flagellum + 1 >= offsets.size()) throw InvalidArgument("flagellum index out of range");
  if (forces.node_count() != system.node_count()) throw InvalidArgument("force set does not match the system");
  const std::size_t first = offsets[flagellum];
  const std::size_t count = offsets[flagellum + 1] - first;
  const std::vector<double> weights = node_weights(system.nodes().subspan(first, count));

  Wrench w;
  for (std::size_t k = 0; k < count; ++k) w.force -= weights[k] * forces.at(first + k);
  w.torque = (attachment - head).cross(w.force);
  return w;
}

std::vector<Wrench> flagella_wrenches(std::span<const geometry::DiscreteFlagellum> flagella, double viscosity,
                                      double regularization, const Vec3& head) {
  const MobilitySystem system = assemble_mobility(flagella, viscosity, regularization);
  std::vector<Vec3> velocities;
  for (const auto& flag : flagella) {
    if (flag.velocities.size() != flag.nodes.size()) throw InvalidArgument("flagellum velocities not populated");
    velocities.insert(velocities.end(), flag.velocities.begin(), flag.velocities.end());
  }
  const NodalForceSet forces = solve_forces(system, geometry::stack(velocities));

  std::vector<Wrench> out;
  for (std::size_t f = 0; f < flagella.size(); ++f) {
    out.push_back(resultant_wrench(forces, system, f, flagella[f].axis_point, head));
  }
  return out;
}

}  // namespace swimsim::rss
