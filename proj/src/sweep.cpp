#include "swimsim/sweep.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <thread>

namespace swimsim::sweep {

Normalized normalize(double force, double torque, const geometry::HelixSpec& spec, double viscosity, double omega) {
  if (omega == 0.0 || !std::isfinite(omega)) throw InvalidArgument("normalization needs a non-zero speed");
  if (!(viscosity > 0.0)) throw InvalidArgument("viscosity must be positive");
  const double scale = viscosity * omega * spec.radius * spec.contour_per_turn();
  return {force / scale, torque / (scale * spec.radius)};
}

std::string_view to_string(LocomotionMode mode) {
  switch (mode) {
    case LocomotionMode::left_turn: return "left_turn";
    case LocomotionMode::right_turn: return "right_turn";
    case LocomotionMode::up_translate: return "up_translate";
    case LocomotionMode::down_translate: return "down_translate";
    case LocomotionMode::unclassified: return "unclassified";
  }
  return "unclassified";
}

LocomotionMode expected_mode(double omega1, double omega2) {
  if (omega1 > 0.0 && omega2 < 0.0) return LocomotionMode::left_turn;
  if (omega1 < 0.0 && omega2 > 0.0) return LocomotionMode::right_turn;
  if (omega1 < 0.0 && omega2 < 0.0) return LocomotionMode::up_translate;
  if (omega1 > 0.0 && omega2 > 0.0) return LocomotionMode::down_translate;
  return LocomotionMode::unclassified;
}

ResponseSummary summarize(const dynamics::PairResponse& response, double spacing) {
  return {response.force[0].z() + response.force[1].z(), response.tail_torque.y(), spacing};
}

Classification classify_mode(double omega1, double omega2, const ResponseSummary& response, double threshold) {
  Classification c;
  c.expected = expected_mode(omega1, omega2);
  const double translate = std::abs(response.net_force_z);
  const double turn = response.spacing > 0.0 ? 2.0 * std::abs(response.torque_y) / response.spacing : 0.0;
  if (translate < threshold && turn < threshold) {
    c.mode = LocomotionMode::unclassified;
  } else if (turn > translate) {
    c.mode = response.torque_y > 0.0 ? LocomotionMode::left_turn : LocomotionMode::right_turn;
  } else {
    c.mode = response.net_force_z > 0.0 ? LocomotionMode::up_translate : LocomotionMode::down_translate;
  }
  c.matches = c.mode == c.expected;
  return c;
}

geometry::RobotGeometry geometry_for(const GridPoint& point, const SweepSettings& settings) {
  if (!(point.lambda_over_l > 0.0 && point.r_over_lambda > 0.0 && point.d_over_r > 0.0)) {
    throw InvalidArgument("grid ratios must be positive");
  }
  geometry::RobotGeometry robot;
  const double radius = settings.helix_radius;
  const double pitch = radius / point.r_over_lambda;
  for (auto& f : robot.flagella) {
    f.radius = radius;
    f.pitch = pitch;
    f.axial_length = pitch / point.lambda_over_l;
    f.cross_section_radius = settings.cross_section_radius;
  }
  robot.spacing = point.d_over_r * radius;
  robot.discretization = settings.discretization;
  return robot;
}

DimensionlessPoint evaluate_point(const GridPoint& point, const SweepSettings& settings) {
  const geometry::RobotGeometry robot = geometry_for(point, settings);
  const geometry::HelixSpec& spec = robot.flagella[0];
  const double w = settings.omega;
  const double mu = settings.viscosity;

  DimensionlessPoint out;
  out.lambda_over_l = point.lambda_over_l;
  out.r_over_lambda = point.r_over_lambda;
  out.d_over_r = point.d_over_r;

  const Vec3 single = dynamics::isolated_flagellum_force(spec, robot.discretization, mu, w, settings.phases);
  out.f_bar = normalize(geometry::axial_thrust(single), 0.0, spec, mu, w).force;

  const dynamics::PairResponse counter = dynamics::steady_rotation_response(robot, mu, w, -w, settings.phases);
  out.t_bar = normalize(0.0, counter.tail_torque.y(), spec, mu, w).torque;
  out.f_bar_counter =
      normalize(0.5 * (counter.force[0].norm() + counter.force[1].norm()), 0.0, spec, mu, w).force;

  const dynamics::PairResponse co = dynamics::steady_rotation_response(robot, mu, w, w, settings.phases);
  const double co_thrust = 0.5 * (geometry::axial_thrust(co.force[0]) + geometry::axial_thrust(co.force[1]));
  out.f_bar_co = normalize(co_thrust, 0.0, spec, mu, w).force;
  out.f_bar_co_magnitude = normalize(0.5 * (co.force[0].norm() + co.force[1].norm()), 0.0, spec, mu, w).force;
  return out;
}

std::vector<DimensionlessPoint> design_sweep(std::span<const GridPoint> points, const SweepSettings& settings) {
  std::vector<DimensionlessPoint> results(points.size());
  std::atomic<std::size_t> next{0};

  const auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      try {
        results[i] = evaluate_point(points[i], settings);
      } catch (const Error& e) {
        DimensionlessPoint failed;
        failed.lambda_over_l = points[i].lambda_over_l;
        failed.r_over_lambda = points[i].r_over_lambda;
        failed.d_over_r = points[i].d_over_r;
        failed.f_bar = failed.t_bar = failed.f_bar_co = failed.f_bar_counter = failed.f_bar_co_magnitude =
            std::nan("");
        failed.ok = false;
        failed.error = e.what();
        results[i] = std::move(failed);
      }
    }
  };

  unsigned count = settings.threads > 0 ? static_cast<unsigned>(settings.threads) : std::thread::hardware_concurrency();
  count = std::clamp<unsigned>(count, 1, static_cast<unsigned>(std::max<std::size_t>(points.size(), 1)));
  if (count == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
  }
  return results;
}

std::vector<GridPoint> pitch_radius_grid(std::span<const double> lambda_over_l, std::span<const double> r_over_lambda,
                                         double d_over_r) {
  std::vector<GridPoint> grid;
  for (double rl : r_over_lambda) {
    for (double ll : lambda_over_l) grid.push_back({ll, rl, d_over_r});
  }
  return grid;
}

std::vector<GridPoint> spacing_grid(std::span<const double> d_over_r, double lambda_over_l, double r_over_lambda) {
  std::vector<GridPoint> grid;
  for (double dr : d_over_r) grid.push_back({lambda_over_l, r_over_lambda, dr});
  return grid;
}

std::vector<double> log_space(double lo, double hi, int n) {
  if (!(lo > 0.0 && hi > 0.0) || n < 1) throw InvalidArgument("log_space needs positive bounds and n >= 1");
  if (n == 1) return {lo};
  std::vector<double> out;
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < n; ++i) out.push_back(std::exp(a + (b - a) * i / (n - 1)));
  out.back() = hi;
  return out;
}

std::vector<double> lin_space(double lo, double hi, int n) {
  if (n < 1) throw InvalidArgument("lin_space needs n >= 1");
  if (n == 1) return {lo};
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * i / (n - 1));
  out.back() = hi;
  return out;
}

std::span<const BacteriaPoint> bacteria_table() {
  static constexpr std::array<BacteriaPoint, 6> table{{
      {"Caulobacter crescentus", 0.1667, 0.1205},
      {"Escherichia coli", 0.3571, 0.0909},
      {"Rhizobium lupini", 0.2500, 0.1852},
      {"Salmonella", 0.2500, 0.0909},
      {"Vibrio alginolyticus", 0.3243, 0.1167},
      {"Bi-flagellated robot", 0.33, 0.2},
  }};
  return table;
}

std::vector<DimensionlessPoint> bacteria_overlay(const SweepSettings& settings) {
  std::vector<GridPoint> points;
  for (const auto& b : bacteria_table()) points.push_back({b.lambda_over_l, b.r_over_lambda, 3.0});
  return design_sweep(points, settings);
}

}  // namespace swimsim::sweep
