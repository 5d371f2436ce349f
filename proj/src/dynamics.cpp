#include "swimsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "swimsim/rss.hpp"

namespace swimsim::dynamics {

using geometry::DiscreteFlagellum;

InertiaModel InertiaModel::solid_cylinder(double mass, double radius, double height) {
  const double transverse = mass * (3.0 * radius * radius + height * height) / 12.0;
  return {transverse, transverse, 0.5 * mass * radius * radius};
}

void InertiaModel::validate() const {
  if (!(ix > 0.0 && iy > 0.0 && iz > 0.0)) throw InvalidArgument("moments of inertia must be positive");
}

SwimmerModel::SwimmerModel(geometry::RobotGeometry geometry, head::HeadParams head, InertiaModel inertia)
    : geometry_(std::move(geometry)), head_(head), inertia_(inertia) {
  geometry_.validate();
  head_.validate();
  inertia_.validate();
  regularization_ = rss::regularization_for(geometry_.flagella[0].cross_section_radius);
  base_ = geometry::mount_flagella(geometry_);
}

SwimmerModel SwimmerModel::default_model() {
  const geometry::RobotGeometry robot = geometry::default_robot();
  head::HeadParams head;
  return SwimmerModel(robot, head, InertiaModel::solid_cylinder(head.mass, head.radius, head.height));
}

ForceModel rss_force_model(double viscosity, double regularization) {
  return [viscosity, regularization](const FlagellaSnapshot& snap) {
    const auto wrenches = rss::flagella_wrenches(snap.flagella, viscosity, regularization, snap.head_position);
    return std::array<Vec3, 2>{wrenches[0].force, wrenches[1].force};
  };
}

ForceModel prescribed_force_model(const Vec3& f1_body, const Vec3& f2_body) {
  return [f1_body, f2_body](const FlagellaSnapshot& snap) {
    return std::array<Vec3, 2>{snap.body_to_inertial * f1_body, snap.body_to_inertial * f2_body};
  };
}

namespace {

// Body-frame flagella at the given spin angles, with spin velocities.
std::array<DiscreteFlagellum, 2> spinning_flagella(const SwimmerModel& model, const std::array<double, 2>& spin,
                                                   double omega1, double omega2) {
  const std::array<double, 2> omega{omega1, omega2};
  std::array<DiscreteFlagellum, 2> out;
  for (std::size_t i = 0; i < 2; ++i) {
    out[i] = geometry::rotate_about_axis(model.base_flagella()[i], spin[i]);
    out[i].velocities = geometry::rigid_rotation_velocities(out[i], omega[i] * out[i].axis_dir, out[i].axis_point);
  }
  return out;
}

// Moves body-frame flagella into the inertial frame and adds the rigid-body
// velocity v + w x (x - head) of the head.
FlagellaSnapshot place(std::array<DiscreteFlagellum, 2> body, const Mat3& rotation, const Vec3& position,
                       const Vec3& velocity, const Vec3& angular_velocity_inertial) {
  FlagellaSnapshot snap;
  snap.body_to_inertial = rotation;
  snap.head_position = position;
  for (std::size_t i = 0; i < 2; ++i) {
    snap.flagella[i] = geometry::transformed(body[i], rotation, position);
    auto& flag = snap.flagella[i];
    for (std::size_t k = 0; k < flag.nodes.size(); ++k) {
      flag.velocities[k] += velocity + angular_velocity_inertial.cross(flag.nodes[k] - position);
    }
  }
  return snap;
}

Mat3 pitch_rotation(double beta) { return Eigen::AngleAxisd(beta, Vec3::UnitY()).toRotationMatrix(); }

}  // namespace

FlagellaSnapshot pivot_snapshot(const PivotState& state, const SwimmerModel& model, double omega1, double omega2) {
  return place(spinning_flagella(model, state.spin, omega1, omega2), pitch_rotation(state.beta), Vec3::Zero(),
               Vec3::Zero(), Vec3(0.0, state.beta_dot, 0.0));
}

FlagellaSnapshot free_snapshot(const FreeState& state, const SwimmerModel& model, double omega1, double omega2) {
  const Mat3 rotation = state.orientation.toRotationMatrix();
  return place(spinning_flagella(model, state.spin, omega1, omega2), rotation, state.position, state.velocity,
               rotation * state.angular_velocity);
}

WrenchSummary pivot_wrench(const PivotState& state, const SwimmerModel& model, double omega1, double omega2,
                           const ForceModel& forces) {
  const FlagellaSnapshot snap = pivot_snapshot(state, model, omega1, omega2);
  const auto f = forces(snap);
  const Mat3 to_body = snap.body_to_inertial.transpose();

  WrenchSummary w;
  w.f_p1 = to_body * f[0];
  w.f_p2 = to_body * f[1];
  w.tail_torque = head::tail_torque(w.f_p1, w.f_p2, model.geometry().spacing);
  w.head_torque = head::head_drag_torque(Vec3(0.0, state.beta_dot, 0.0), model.head());
  w.righting_moment = Vec3(0.0, head::righting_moment(state.beta, model.head()), 0.0);
  return w;
}

PivotStep step_pivot(const PivotState& state, const SwimmerModel& model, double omega1, double omega2, double dt,
                     const ForceModel& forces) {
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  PivotStep out;
  out.wrench = pivot_wrench(state, model, omega1, omega2, forces);

  const double iy = model.inertia().iy;
  const double damping = head::rotational_drag_coefficient(model.head());
  const double drive = out.wrench.tail_torque.y() + out.wrench.righting_moment.y();

  out.state = state;
  out.state.beta_dot = (state.beta_dot + dt * drive / iy) / (1.0 + dt * damping / iy);
  out.state.beta = state.beta + dt * out.state.beta_dot;
  out.state.spin[0] += omega1 * dt;
  out.state.spin[1] += omega2 * dt;
  out.state.t += dt;
  return out;
}

namespace {

struct FreeRate {
  Vec3 velocity;
  Vec3 acceleration;
  Eigen::Vector4d orientation;  // dq/dt as (w, x, y, z)
  Vec3 angular_acceleration;
};

Eigen::Vector4d as_vector(const Eigen::Quaterniond& q) { return {q.w(), q.x(), q.y(), q.z()}; }

Eigen::Quaterniond normalized(const Eigen::Vector4d& v) {
  Eigen::Quaterniond q(v[0], v[1], v[2], v[3]);
  q.normalize();
  return q;
}

FreeRate free_rate(const FreeState& state, const SwimmerModel& model, double omega1, double omega2,
                   const ForceModel& forces, WrenchSummary* summary) {
  const FlagellaSnapshot snap = free_snapshot(state, model, omega1, omega2);
  const auto f = forces(snap);
  const Mat3& rotation = snap.body_to_inertial;
  const Mat3 to_body = rotation.transpose();
  const head::HeadParams& hp = model.head();

  WrenchSummary w;
  w.f_p1 = to_body * f[0];
  w.f_p2 = to_body * f[1];
  w.tail_torque = head::tail_torque(w.f_p1, w.f_p2, model.geometry().spacing);
  const Vec3 drag_inertial = head::head_drag_force(state.velocity, hp);
  w.head_force = to_body * drag_inertial;
  w.head_torque = head::head_drag_torque(state.angular_velocity, hp);
  w.righting_moment = head::righting_moment(rotation, hp);
  if (summary != nullptr) *summary = w;

  const InertiaModel& in = model.inertia();
  const Vec3 j(in.ix, in.iy, in.iz);
  const Vec3& omega = state.angular_velocity;
  const Vec3 torque = -omega.cross(j.cwiseProduct(omega)) + w.head_torque + w.righting_moment + w.tail_torque;

  FreeRate rate;
  rate.velocity = state.velocity;
  rate.acceleration = (drag_inertial + f[0] + f[1]) / hp.mass;
  const Eigen::Quaterniond spin_q(0.0, omega.x(), omega.y(), omega.z());
  rate.orientation = 0.5 * as_vector(state.orientation * spin_q);
  rate.angular_acceleration = torque.cwiseQuotient(j);
  return rate;
}

FreeState advanced(const FreeState& state, const FreeRate& rate, double h, double omega1, double omega2) {
  FreeState out = state;
  out.position += h * rate.velocity;
  out.velocity += h * rate.acceleration;
  out.orientation = normalized(as_vector(state.orientation) + h * rate.orientation);
  out.angular_velocity += h * rate.angular_acceleration;
  out.spin[0] += omega1 * h;
  out.spin[1] += omega2 * h;
  out.t += h;
  return out;
}

}  // namespace

int free_substeps(const SwimmerModel& model, double dt) {
  const InertiaModel& in = model.inertia();
  const double min_inertia = std::min({in.ix, in.iy, in.iz});
  const double rate = std::max(head::translational_drag_coefficient(model.head()) / model.head().mass,
                               head::rotational_drag_coefficient(model.head()) / min_inertia);
  return std::max(1, static_cast<int>(std::ceil(dt * rate)));
}

FreeStep step_free(const FreeState& state, const SwimmerModel& model, double omega1, double omega2, double dt,
                   const ForceModel& forces) {
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  if (std::abs(state.orientation.norm() - 1.0) > 1e-9) throw InvalidArgument("orientation quaternion is not unit");

  const int substeps = free_substeps(model, dt);
  const double h = dt / substeps;

  FreeStep out;
  FreeState current = state;
  for (int i = 0; i < substeps; ++i) {
    const FreeRate k1 = free_rate(current, model, omega1, omega2, forces, i == 0 ? &out.wrench : nullptr);
    const FreeState mid = advanced(current, k1, 0.5 * h, omega1, omega2);
    const FreeRate k2 = free_rate(mid, model, omega1, omega2, forces, nullptr);
    current = advanced(current, k2, h, omega1, omega2);
  }
  current.t = state.t + dt;
  out.state = current;
  return out;
}

Trajectory run_sim(const SwimmerModel& model, const SimOptions& options, const ForceModel& forces) {
  if (!(options.dt > 0.0)) throw InvalidArgument("time step must be positive");
  if (!(options.t_end >= 0.0)) throw InvalidArgument("end time must be non-negative");

  const auto steps = static_cast<std::size_t>(std::llround(options.t_end / options.dt));
  Trajectory traj;
  traj.mode = options.mode;

  double t = 0.0;
  try {
    if (options.mode == Mode::pivot) {
      PivotState state = options.pivot_initial;
      state.t = 0.0;
      traj.pivot.reserve(steps + 1);
      for (std::size_t k = 0; k < steps; ++k) {
        t = state.t;
        PivotStep step = step_pivot(state, model, options.omega1, options.omega2, options.dt, forces);
        traj.pivot.push_back({state, step.wrench});
        state = step.state;
        state.t = static_cast<double>(k + 1) * options.dt;
      }
      t = state.t;
      traj.pivot.push_back({state, pivot_wrench(state, model, options.omega1, options.omega2, forces)});
    } else {
      FreeState state = options.free_initial;
      state.t = 0.0;
      traj.free.reserve(steps + 1);
      for (std::size_t k = 0; k < steps; ++k) {
        t = state.t;
        FreeStep step = step_free(state, model, options.omega1, options.omega2, options.dt, forces);
        traj.free.push_back({state, step.wrench});
        state = step.state;
        state.t = static_cast<double>(k + 1) * options.dt;
      }
      t = state.t;
      WrenchSummary last;
      free_rate(state, model, options.omega1, options.omega2, forces, &last);
      traj.free.push_back({state, last});
    }
  } catch (const NumericalError& e) {
    std::ostringstream msg;
    msg << "at t = " << t << " s: " << e.what();
    throw NumericalError(msg.str());
  }
  return traj;
}

double pitch_angle(const Eigen::Quaterniond& orientation) {
  const Vec3 z = orientation * Vec3::UnitZ();
  return std::atan2(z.x(), z.z());
}

}  // namespace swimsim::dynamics

namespace swimsim::dynamics {

namespace {

std::vector<double> sample_times(double omega1, double omega2, int phases, int start_revolution) {
  if (phases < 1) throw InvalidArgument("need at least one phase sample");
  const double fastest = std::max(std::abs(omega1), std::abs(omega2));
  if (fastest == 0.0) return {0.0};
  const double period = 2.0 * kPi / fastest;
  std::vector<double> times;
  for (int j = 0; j < phases; ++j) {
    times.push_back((start_revolution + (j + 0.5) / phases) * period);
  }
  return times;
}

}  // namespace

PairResponse steady_rotation_response(const geometry::RobotGeometry& robot, double viscosity, double omega1,
                                      double omega2, int phases, int start_revolution) {
  robot.validate();
  const auto base = geometry::mount_flagella(robot);
  const double c = rss::regularization_for(robot.flagella[0].cross_section_radius);
  const std::array<double, 2> omega{omega1, omega2};
  const std::vector<double> times = sample_times(omega1, omega2, phases, start_revolution);

  PairResponse out;
  for (double t : times) {
    std::array<DiscreteFlagellum, 2> flags;
    for (std::size_t i = 0; i < 2; ++i) {
      flags[i] = geometry::rotate_about_axis(base[i], omega[i] * t);
      flags[i].velocities = geometry::rigid_rotation_velocities(flags[i], omega[i] * flags[i].axis_dir,
                                                                flags[i].axis_point);
    }
    const auto w = rss::flagella_wrenches(flags, viscosity, c);
    out.force[0] += w[0].force;
    out.force[1] += w[1].force;
  }
  const double n = static_cast<double>(times.size());
  out.force[0] /= n;
  out.force[1] /= n;
  out.tail_torque = head::tail_torque(out.force[0], out.force[1], robot.spacing);
  return out;
}

Vec3 isolated_flagellum_force(const geometry::HelixSpec& spec, double discretization, double viscosity,
                              double omega, int phases) {
  geometry::HelixSpec local = spec;
  local.origin = Vec3::Zero();
  const DiscreteFlagellum base =
      geometry::transformed(geometry::discretize_helix(local, discretization), geometry::mount_rotation(), Vec3::Zero());
  const double c = rss::regularization_for(spec.cross_section_radius);
  const std::vector<double> times = sample_times(omega, 0.0, phases, 1);

  Vec3 total = Vec3::Zero();
  for (double t : times) {
    std::array<DiscreteFlagellum, 1> flag{geometry::rotate_about_axis(base, omega * t)};
    flag[0].velocities = geometry::rigid_rotation_velocities(flag[0], omega * flag[0].axis_dir, flag[0].axis_point);
    total += rss::flagella_wrenches(flag, viscosity, c)[0].force;
  }
  return total / static_cast<double>(times.size());
}

}  // namespace swimsim::dynamics
