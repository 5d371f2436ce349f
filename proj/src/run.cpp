#include "swimsim/run.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include <fmt/format.h>

#include "swimsim/control.hpp"
#include "swimsim/sweep.hpp"

namespace swimsim::app {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Summary = std::vector<std::pair<std::string, std::string>>;

struct SummaryWriter {
  Summary entries;
  std::string text;

  void add(std::string_view key, double value, std::string_view unit) {
    entries.emplace_back(std::string(key), fmt::format("{:.17g}", value));
    text += fmt::format("{},{:.17g},{}\n", key, value, unit);
  }
  void add(std::string_view key, std::string_view value) {
    entries.emplace_back(std::string(key), std::string(value));
    text += fmt::format("{},{},\n", key, value);
  }
};

std::string num(double v) { return fmt::format("{:.12g}", v); }

void append_vec(std::string& row, const Vec3& v) {
  for (int i = 0; i < 3; ++i) row += "," + num(v[i]);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
  out << content;
  if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

std::string vec_columns(std::string_view name, std::string_view unit) {
  return fmt::format(",{0}_x [{1}],{0}_y [{1}],{0}_z [{1}]", name, unit);
}

// Per-flagellum axial thrust and turnover torque in normalized form.
struct NormalizedLoads {
  double f_bar1 = kNaN;
  double f_bar2 = kNaN;
  double t_bar = kNaN;
};

NormalizedLoads normalized_loads(const dynamics::WrenchSummary& w, const geometry::HelixSpec& spec, double mu,
                                 double omega1, double omega2) {
  NormalizedLoads n;
  if (omega1 != 0.0) n.f_bar1 = sweep::normalize(geometry::axial_thrust(w.f_p1), 0.0, spec, mu, omega1).force;
  if (omega2 != 0.0) n.f_bar2 = sweep::normalize(geometry::axial_thrust(w.f_p2), 0.0, spec, mu, omega2).force;
  const double w_ref = std::max(std::abs(omega1), std::abs(omega2));
  if (w_ref > 0.0) n.t_bar = sweep::normalize(0.0, w.tail_torque.y(), spec, mu, w_ref).torque;
  return n;
}

double mean_defined(std::initializer_list<double> values) {
  double sum = 0.0;
  int n = 0;
  for (double v : values) {
    if (std::isfinite(v)) {
      sum += v;
      ++n;
    }
  }
  return n ? sum / n : kNaN;
}

struct TailAverages {
  double beta = 0.0;
  double thrust1 = 0.0;
  double thrust2 = 0.0;
  double f_bar = 0.0;
  double t_bar = 0.0;
};

// Averages over the last tenth of the run (at least one record).
template <typename Records, typename Beta>
TailAverages tail_averages(const Records& records, const config::RunConfig& c, const geometry::HelixSpec& spec,
                           double omega1, double omega2, Beta beta_of) {
  const std::size_t n = records.size();
  const std::size_t count = std::max<std::size_t>(1, n / 10);
  TailAverages a;
  double f_sum = 0.0;
  double t_sum = 0.0;
  std::size_t f_n = 0;
  std::size_t t_n = 0;
  for (std::size_t k = n - count; k < n; ++k) {
    const auto& r = records[k];
    a.beta += beta_of(r);
    a.thrust1 += geometry::axial_thrust(r.wrench.f_p1);
    a.thrust2 += geometry::axial_thrust(r.wrench.f_p2);
    const NormalizedLoads nl = normalized_loads(r.wrench, spec, c.mu, omega1, omega2);
    const double f = mean_defined({nl.f_bar1, nl.f_bar2});
    if (std::isfinite(f)) {
      f_sum += f;
      ++f_n;
    }
    if (std::isfinite(nl.t_bar)) {
      t_sum += nl.t_bar;
      ++t_n;
    }
  }
  a.beta /= count;
  a.thrust1 /= count;
  a.thrust2 /= count;
  a.f_bar = f_n ? f_sum / f_n : kNaN;
  a.t_bar = t_n ? t_sum / t_n : kNaN;
  return a;
}

std::string pivot_table(const dynamics::Trajectory& traj, const config::RunConfig& c,
                        const geometry::HelixSpec& spec, double omega1, double omega2) {
  std::string out = trajectory_header(dynamics::Mode::pivot);
  for (const auto& r : traj.pivot) {
    const auto& w = r.wrench;
    std::string row = num(r.state.t) + "," + num(r.state.beta) + "," + num(r.state.beta_dot);
    row += "," + num(omega1) + "," + num(omega2);
    append_vec(row, w.f_p1);
    append_vec(row, w.f_p2);
    append_vec(row, w.tail_torque);
    row += "," + num(w.head_torque.y()) + "," + num(w.righting_moment.y());
    const NormalizedLoads nl = normalized_loads(w, spec, c.mu, omega1, omega2);
    row += "," + num(nl.f_bar1) + "," + num(nl.f_bar2) + "," + num(nl.t_bar) + "\n";
    out += row;
  }
  return out;
}

std::string free_table(const dynamics::Trajectory& traj, const config::RunConfig& c, const geometry::HelixSpec& spec,
                       double omega1, double omega2) {
  std::string out = trajectory_header(dynamics::Mode::free);
  for (const auto& r : traj.free) {
    const auto& s = r.state;
    const auto& w = r.wrench;
    std::string row = num(s.t);
    append_vec(row, s.position);
    append_vec(row, s.velocity);
    row += "," + num(s.orientation.w()) + "," + num(s.orientation.x()) + "," + num(s.orientation.y()) + "," +
           num(s.orientation.z());
    append_vec(row, s.angular_velocity);
    row += "," + num(dynamics::pitch_angle(s.orientation));
    row += "," + num(omega1) + "," + num(omega2);
    append_vec(row, w.f_p1);
    append_vec(row, w.f_p2);
    append_vec(row, w.tail_torque);
    append_vec(row, w.head_force);
    append_vec(row, w.head_torque);
    append_vec(row, w.righting_moment);
    const NormalizedLoads nl = normalized_loads(w, spec, c.mu, omega1, omega2);
    row += "," + num(nl.f_bar1) + "," + num(nl.f_bar2) + "," + num(nl.t_bar) + "\n";
    out += row;
  }
  return out;
}

void check_time_step(const config::RunConfig& c, double omega1, double omega2) {
  const double w = std::max(std::abs(omega1), std::abs(omega2));
  if (w > 0.0 && c.dt > 0.1 * 2.0 * kPi / w) {
    throw ConfigError(fmt::format("dt = {} is too coarse for |omega| = {} rad/s; use dt <= {}", c.dt, w,
                                  0.2 * kPi / w));
  }
}

dynamics::Trajectory simulate(const config::RunConfig& c, const dynamics::SwimmerModel& model, dynamics::Mode mode,
                              double omega1, double omega2) {
  dynamics::SimOptions opt;
  opt.mode = mode;
  opt.omega1 = omega1;
  opt.omega2 = omega2;
  opt.t_end = c.T_end;
  opt.dt = c.dt;
  opt.pivot_initial.beta = c.beta0;
  opt.free_initial.orientation = Eigen::Quaterniond(Eigen::AngleAxisd(c.beta0, Vec3::UnitY()));
  return dynamics::run_sim(model, opt, dynamics::rss_force_model(model.viscosity(), model.regularization()));
}

void summarize_pivot(SummaryWriter& s, const dynamics::Trajectory& traj, const config::RunConfig& c,
                     const dynamics::SwimmerModel& model, double omega1, double omega2) {
  const auto& spec = model.geometry().flagella[0];
  const TailAverages a =
      tail_averages(traj.pivot, c, spec, omega1, omega2, [](const dynamics::PivotRecord& r) { return r.state.beta; });
  const double stiffness = c.m_h * c.g * c.r_m;
  s.add("steps", static_cast<double>(traj.size() - 1), "1");
  s.add("t_end", traj.pivot.back().state.t, "s");
  s.add("beta_final", traj.pivot.back().state.beta, "rad");
  s.add("beta_ss", a.beta, "rad");
  s.add("beta_ss_linear", (a.thrust1 - a.thrust2) * c.d / (2.0 * stiffness), "rad");
  s.add("thrust1_mean", a.thrust1, "N");
  s.add("thrust2_mean", a.thrust2, "N");
  s.add("F_bar_mean", a.f_bar, "1");
  s.add("T_bar_mean", a.t_bar, "1");
}

void summarize_free(SummaryWriter& s, const dynamics::Trajectory& traj, const config::RunConfig& c,
                    const dynamics::SwimmerModel& model, double omega1, double omega2) {
  const auto& spec = model.geometry().flagella[0];
  const TailAverages a = tail_averages(traj.free, c, spec, omega1, omega2, [](const dynamics::FreeRecord& r) {
    return dynamics::pitch_angle(r.state.orientation);
  });
  const auto& last = traj.free.back().state;
  s.add("steps", static_cast<double>(traj.size() - 1), "1");
  s.add("t_end", last.t, "s");
  s.add("x_final", last.position.x(), "m");
  s.add("y_final", last.position.y(), "m");
  s.add("z_final", last.position.z(), "m");
  s.add("pitch_final", dynamics::pitch_angle(last.orientation), "rad");
  s.add("beta_ss", a.beta, "rad");
  s.add("speed_final", last.velocity.norm(), "m/s");
  s.add("F_bar_mean", a.f_bar, "1");
  s.add("T_bar_mean", a.t_bar, "1");
}

control::PropulsionCalibration calibrate(const config::RunConfig& c) {
  return control::calibrate_propulsion(config::robot_geometry(c), c.mu, c.omega_grid, c.phases);
}

std::string calibration_table(const control::PropulsionCalibration& cal) {
  std::string out = calibration_header();
  for (std::size_t i = 0; i < cal.omegas.size(); ++i) {
    out += fmt::format("{},{},{},{}\n", num(cal.omegas[i]), num(-cal.omegas[i]), num(cal.thrust1[i]),
                       num(cal.thrust2[i]));
  }
  return out;
}

void summarize_calibration(SummaryWriter& s, const control::PropulsionCalibration& cal, double force_limit) {
  s.add("K1", cal.k1, "N*s/rad");
  s.add("K2", cal.k2, "N*s/rad");
  s.add("fit_residual", cal.residual, "1");
  s.add("f_max", force_limit, "N");
}

std::string csv_text(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch == '\n' ? ' ' : ch;
  }
  return out + "\"";
}

std::string sweep_table(const std::vector<sweep::DimensionlessPoint>& points, const std::vector<std::string>& labels) {
  std::string out = sweep_header();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", csv_text(labels[i]), num(p.lambda_over_l),
                       num(p.r_over_lambda), num(p.d_over_r), num(p.f_bar), num(p.t_bar), num(p.f_bar_co),
                       num(p.f_bar_counter), num(p.f_bar_co_magnitude), p.ok ? "ok" : "failed", csv_text(p.error));
  }
  return out;
}

}  // namespace

std::string trajectory_header(dynamics::Mode mode) {
  std::string h;
  if (mode == dynamics::Mode::pivot) {
    h = "t [s],beta [rad],beta_dot [rad/s],omega1 [rad/s],omega2 [rad/s]";
    h += vec_columns("f_p1", "N") + vec_columns("f_p2", "N") + vec_columns("T_tail", "N*m");
    h += ",T_head_y [N*m],T_m_y [N*m]";
  } else {
    h = "t [s]" + vec_columns("position", "m") + vec_columns("velocity", "m/s");
    h += ",q_w [1],q_x [1],q_y [1],q_z [1]" + vec_columns("angular_velocity", "rad/s") + ",pitch [rad]";
    h += ",omega1 [rad/s],omega2 [rad/s]";
    h += vec_columns("f_p1", "N") + vec_columns("f_p2", "N") + vec_columns("T_tail", "N*m");
    h += vec_columns("F_head", "N") + vec_columns("T_head", "N*m") + vec_columns("T_m", "N*m");
  }
  h += ",F_bar_1 [1],F_bar_2 [1],T_bar [1]\n";
  return h;
}

std::string sweep_header() {
  return "label,lambda_over_l [1],R_over_lambda [1],d_over_R [1],F_bar [1],T_bar [1],F_bar_co [1],"
         "F_bar_counter_magnitude [1],F_bar_co_magnitude [1],status,error\n";
}

std::string calibration_header() { return "omega1 [rad/s],omega2 [rad/s],thrust1 [N],thrust2 [N]\n"; }

std::string summary_header() { return "quantity,value,unit\n"; }

std::string_view table_file_name(config::RunMode mode) {
  switch (mode) {
    case config::RunMode::pivot:
    case config::RunMode::free:
    case config::RunMode::control: return "trajectory.csv";
    case config::RunMode::sweep: return "sweep.csv";
    case config::RunMode::calibrate: return "calibration.csv";
  }
  return "trajectory.csv";
}

RunReport run(const config::RunConfig& c, const std::filesystem::path& out_dir) {
  config::validate(c);
  const config::RunMode mode = *c.mode;

  SummaryWriter summary;
  summary.add("mode", config::to_string(mode));
  std::string table;

  if (mode == config::RunMode::pivot || mode == config::RunMode::free) {
    const auto model = config::swimmer_model(c);
    const auto dyn_mode = mode == config::RunMode::pivot ? dynamics::Mode::pivot : dynamics::Mode::free;
    const auto traj = simulate(c, model, dyn_mode, c.omega1, c.omega2);
    if (dyn_mode == dynamics::Mode::pivot) {
      table = pivot_table(traj, c, model.geometry().flagella[0], c.omega1, c.omega2);
      summarize_pivot(summary, traj, c, model, c.omega1, c.omega2);
    } else {
      table = free_table(traj, c, model.geometry().flagella[0], c.omega1, c.omega2);
      summarize_free(summary, traj, c, model, c.omega1, c.omega2);
    }
  } else if (mode == config::RunMode::calibrate) {
    const auto cal = calibrate(c);
    table = calibration_table(cal);
    summarize_calibration(summary, cal, c.f_max > 0.0 ? c.f_max : control::default_force_limit(cal, c.omega_max));
  } else if (mode == config::RunMode::control) {
    const auto model = config::swimmer_model(c);
    const auto cal = calibrate(c);
    const double limit = c.f_max > 0.0 ? c.f_max : control::default_force_limit(cal, c.omega_max);
    const auto speeds = control::solve_speeds(c.beta_ref, cal, model.head(), c.d, limit);
    check_time_step(c, speeds.omega1, speeds.omega2);
    const auto plant = control::build_plant(model.geometry(), model.head(), model.inertia());
    const auto ss = control::steady_state(plant, speeds.thrust1, speeds.thrust2, model.head(), c.d);
    summarize_calibration(summary, cal, limit);
    summary.add("beta_ref", c.beta_ref, "rad");
    summary.add("beta_max", speeds.beta_max, "rad");
    summary.add("omega1", speeds.omega1, "rad/s");
    summary.add("omega2", speeds.omega2, "rad/s");
    summary.add("omega1_rpm", speeds.omega1 * 60.0 / (2.0 * kPi), "rpm");
    summary.add("omega2_rpm", speeds.omega2 * 60.0 / (2.0 * kPi), "rpm");
    summary.add("beta_ss_plant", ss.beta, "rad");
    const auto traj = simulate(c, model, dynamics::Mode::pivot, speeds.omega1, speeds.omega2);
    table = pivot_table(traj, c, model.geometry().flagella[0], speeds.omega1, speeds.omega2);
    summarize_pivot(summary, traj, c, model, speeds.omega1, speeds.omega2);
  } else {
    const auto settings = config::sweep_settings(c);
    std::vector<sweep::GridPoint> grid;
    std::vector<std::string> labels;
    if (c.sweep_kind == config::SweepKind::bacteria) {
      for (const auto& b : sweep::bacteria_table()) {
        grid.push_back({b.lambda_over_l, b.r_over_lambda, c.sweep_d_over_R});
        labels.emplace_back(b.label);
      }
    } else if (c.sweep_kind == config::SweepKind::pitch_radius) {
      const auto ll = sweep::log_space(c.sweep_lambda_over_l_min, c.sweep_lambda_over_l_max, c.sweep_lambda_over_l_n);
      const auto rl = sweep::log_space(c.sweep_R_over_lambda_min, c.sweep_R_over_lambda_max, c.sweep_R_over_lambda_n);
      grid = sweep::pitch_radius_grid(ll, rl, c.sweep_d_over_R);
    } else {
      const auto dr = sweep::lin_space(c.sweep_d_over_R_min, c.sweep_d_over_R_max, c.sweep_d_over_R_n);
      grid = sweep::spacing_grid(dr, c.sweep_lambda_over_l, c.sweep_R_over_lambda);
    }
    labels.resize(grid.size());
    const auto points = sweep::design_sweep(grid, settings);
    table = sweep_table(points, labels);
    std::size_t failed = 0;
    double f_sum = 0.0;
    double t_sum = 0.0;
    for (const auto& p : points) {
      if (!p.ok) {
        ++failed;
        continue;
      }
      f_sum += p.f_bar;
      t_sum += p.t_bar;
    }
    const std::size_t ok = points.size() - failed;
    summary.add("sweep_kind", config::to_string(c.sweep_kind));
    summary.add("points", static_cast<double>(points.size()), "1");
    summary.add("failed_points", static_cast<double>(failed), "1");
    summary.add("F_bar_mean", ok ? f_sum / ok : kNaN, "1");
    summary.add("T_bar_mean", ok ? t_sum / ok : kNaN, "1");
  }

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError(fmt::format("cannot create output directory '{}': {}", out_dir.string(), ec.message()));

  RunReport report;
  report.config_file = out_dir / kConfigFile;
  report.table_file = out_dir / table_file_name(mode);
  report.summary_file = out_dir / kSummaryFile;
  report.summary = summary.entries;

  const std::string header =
      fmt::format("# swimsim {}\n# schema {}\n", swimsim::version(), kSchemaVersion);
  write_file(report.config_file, header + config::to_text(c));
  write_file(report.table_file, table);
  write_file(report.summary_file, summary_header() + summary.text);
  return report;
}

}  // namespace swimsim::app
