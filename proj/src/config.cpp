#include "swimsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include <fmt/format.h>

namespace swimsim::config {
namespace {

enum class Unit { none, speed, angle };

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(std::string_view text, Unit unit) {
  text = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr == text.data()) throw ConfigError(fmt::format("'{}' is not a number", text));
  const std::string_view suffix = trim(std::string_view(ptr, text.data() + text.size() - ptr));
  if (suffix.empty()) return value;
  if (unit == Unit::speed) {
    if (suffix == "rpm") return value * 2.0 * kPi / 60.0;
    if (suffix == "rad/s") return value;
    throw ConfigError(fmt::format("unknown speed unit '{}' (use rad/s or rpm)", suffix));
  }
  if (unit == Unit::angle) {
    if (suffix == "deg") return value * kPi / 180.0;
    if (suffix == "rad") return value;
    throw ConfigError(fmt::format("unknown angle unit '{}' (use rad or deg)", suffix));
  }
  throw ConfigError(fmt::format("unexpected text '{}' after number", suffix));
}

template <typename Int>
Int parse_integer(std::string_view text) {
  text = trim(text);
  Int value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError(fmt::format("'{}' is not an integer", text));
  }
  return value;
}

std::string format_number(double v) { return fmt::format("{:.17g}", v); }

struct Field {
  std::string_view key;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

Field number(std::string_view key, double RunConfig::*member, Unit unit = Unit::none) {
  return {key, [member, unit](RunConfig& c, std::string_view v) { c.*member = parse_number(v, unit); },
          [member](const RunConfig& c) { return format_number(c.*member); }};
}

Field integer(std::string_view key, int RunConfig::*member) {
  return {key, [member](RunConfig& c, std::string_view v) { c.*member = parse_integer<int>(v); },
          [member](const RunConfig& c) { return std::to_string(c.*member); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(number("E", &RunConfig::E));
    f.push_back(number("rho", &RunConfig::rho));
    f.push_back(number("mu", &RunConfig::mu));
    f.push_back(number("r0", &RunConfig::r0));
    f.push_back(number("R", &RunConfig::R));
    f.push_back(number("lambda", &RunConfig::lambda));
    f.push_back(number("l", &RunConfig::l));
    f.push_back(number("d", &RunConfig::d));
    f.push_back(number("r_h", &RunConfig::r_h));
    f.push_back(number("h", &RunConfig::h));
    f.push_back(number("r_m", &RunConfig::r_m));
    f.push_back(number("m_h", &RunConfig::m_h));
    f.push_back(number("g", &RunConfig::g));
    f.push_back(number("dl", &RunConfig::dl));
    f.push_back(number("dt", &RunConfig::dt));
    f.push_back(number("C_t", &RunConfig::C_t));
    f.push_back(number("C_r", &RunConfig::C_r));
    f.push_back({"mode",
                 [](RunConfig& c, std::string_view v) {
                   const auto m = parse_mode(trim(v));
                   if (!m) throw ConfigError(fmt::format("unknown mode '{}'", trim(v)));
                   c.mode = m;
                 },
                 [](const RunConfig& c) { return c.mode ? std::string(to_string(*c.mode)) : std::string(); }});
    f.push_back(number("omega1", &RunConfig::omega1, Unit::speed));
    f.push_back(number("omega2", &RunConfig::omega2, Unit::speed));
    f.push_back(number("beta_ref", &RunConfig::beta_ref, Unit::angle));
    f.push_back(number("beta0", &RunConfig::beta0, Unit::angle));
    f.push_back(number("T_end", &RunConfig::T_end));
    f.push_back({"output", [](RunConfig& c, std::string_view v) { c.output = std::string(trim(v)); },
                 [](const RunConfig& c) { return c.output; }});
    f.push_back({"seed", [](RunConfig& c, std::string_view v) { c.seed = parse_integer<long long>(v); },
                 [](const RunConfig& c) { return std::to_string(c.seed); }});
    f.push_back(integer("phases", &RunConfig::phases));
    f.push_back(integer("threads", &RunConfig::threads));
    f.push_back(number("omega_max", &RunConfig::omega_max, Unit::speed));
    f.push_back(number("f_max", &RunConfig::f_max));
    f.push_back({"omega_grid",
                 [](RunConfig& c, std::string_view v) {
                   std::vector<double> grid;
                   std::string_view rest = v;
                   while (true) {
                     const auto comma = rest.find(',');
                     grid.push_back(parse_number(rest.substr(0, comma), Unit::speed));
                     if (comma == std::string_view::npos) break;
                     rest = rest.substr(comma + 1);
                   }
                   c.omega_grid = std::move(grid);
                 },
                 [](const RunConfig& c) {
                   std::string out;
                   for (std::size_t i = 0; i < c.omega_grid.size(); ++i) {
                     if (i) out += ", ";
                     out += format_number(c.omega_grid[i]);
                   }
                   return out;
                 }});
    f.push_back({"sweep_kind",
                 [](RunConfig& c, std::string_view v) {
                   v = trim(v);
                   if (v == "pitch_radius") c.sweep_kind = SweepKind::pitch_radius;
                   else if (v == "spacing") c.sweep_kind = SweepKind::spacing;
                   else if (v == "bacteria") c.sweep_kind = SweepKind::bacteria;
                   else throw ConfigError(fmt::format("unknown sweep kind '{}'", v));
                 },
                 [](const RunConfig& c) { return std::string(to_string(c.sweep_kind)); }});
    f.push_back(number("sweep_omega", &RunConfig::sweep_omega, Unit::speed));
    f.push_back(number("sweep_lambda_over_l", &RunConfig::sweep_lambda_over_l));
    f.push_back(number("sweep_R_over_lambda", &RunConfig::sweep_R_over_lambda));
    f.push_back(number("sweep_d_over_R", &RunConfig::sweep_d_over_R));
    f.push_back(number("sweep_lambda_over_l_min", &RunConfig::sweep_lambda_over_l_min));
    f.push_back(number("sweep_lambda_over_l_max", &RunConfig::sweep_lambda_over_l_max));
    f.push_back(integer("sweep_lambda_over_l_n", &RunConfig::sweep_lambda_over_l_n));
    f.push_back(number("sweep_R_over_lambda_min", &RunConfig::sweep_R_over_lambda_min));
    f.push_back(number("sweep_R_over_lambda_max", &RunConfig::sweep_R_over_lambda_max));
    f.push_back(integer("sweep_R_over_lambda_n", &RunConfig::sweep_R_over_lambda_n));
    f.push_back(number("sweep_d_over_R_min", &RunConfig::sweep_d_over_R_min));
    f.push_back(number("sweep_d_over_R_max", &RunConfig::sweep_d_over_R_max));
    f.push_back(integer("sweep_d_over_R_n", &RunConfig::sweep_d_over_R_n));
    return f;
  }();
  return table;
}

const Field& find_field(std::string_view key) {
  for (const auto& f : fields()) {
    if (f.key == key) return f;
  }
  throw ConfigError(fmt::format("unknown key '{}'", key));
}

void assign(RunConfig& config, std::string_view key, std::string_view value) {
  const Field& field = find_field(key);
  try {
    field.set(config, value);
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", key, e.what()));
  }
}

}  // namespace

std::string_view to_string(RunMode mode) {
  switch (mode) {
    case RunMode::pivot: return "pivot";
    case RunMode::free: return "free";
    case RunMode::sweep: return "sweep";
    case RunMode::control: return "control";
    case RunMode::calibrate: return "calibrate";
  }
  return "pivot";
}

std::string_view to_string(SweepKind kind) {
  switch (kind) {
    case SweepKind::pitch_radius: return "pitch_radius";
    case SweepKind::spacing: return "spacing";
    case SweepKind::bacteria: return "bacteria";
  }
  return "spacing";
}

std::optional<RunMode> parse_mode(std::string_view text) {
  for (RunMode m : {RunMode::pivot, RunMode::free, RunMode::sweep, RunMode::control, RunMode::calibrate}) {
    if (to_string(m) == text) return m;
  }
  return std::nullopt;
}

RunConfig parse_config(std::string_view text, std::string_view source) {
  RunConfig config;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(fmt::format("{}:{}: expected 'key = value'", source, line_no));
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(fmt::format("{}:{}: missing key", source, line_no));
    try {
      assign(config, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("{}:{}: {}", source, line_no, e.what()));
    }
  }
  return config;
}

void apply_override(RunConfig& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError(fmt::format("override '{}' is not key=value", assignment));
  }
  try {
    assign(config, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("override: {}", e.what()));
  }
}

RunConfig load_config(const std::filesystem::path& path, std::span<const std::string> overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  RunConfig config = parse_config(buffer.str(), path.string());
  for (const auto& o : overrides) apply_override(config, o);
  validate(config);
  return config;
}

std::vector<std::string> violations(const RunConfig& c) {
  std::vector<std::string> out;
  const auto positive = [&](std::string_view key, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) out.push_back(fmt::format("{} must be positive (got {})", key, v));
  };
  const auto finite = [&](std::string_view key, double v) {
    if (!std::isfinite(v)) out.push_back(fmt::format("{} must be finite", key));
  };
  if (!c.mode) out.push_back("mode is required (pivot, free, sweep, control or calibrate)");
  positive("E", c.E);
  positive("rho", c.rho);
  positive("mu", c.mu);
  positive("r0", c.r0);
  positive("R", c.R);
  positive("lambda", c.lambda);
  positive("l", c.l);
  positive("d", c.d);
  positive("r_h", c.r_h);
  positive("h", c.h);
  positive("r_m", c.r_m);
  positive("m_h", c.m_h);
  positive("g", c.g);
  positive("dl", c.dl);
  positive("dt", c.dt);
  positive("C_t", c.C_t);
  positive("C_r", c.C_r);
  positive("T_end", c.T_end);
  positive("omega_max", c.omega_max);
  finite("omega1", c.omega1);
  finite("omega2", c.omega2);
  finite("beta_ref", c.beta_ref);
  finite("beta0", c.beta0);
  if (!(c.f_max >= 0.0) || !std::isfinite(c.f_max)) out.push_back("f_max must be >= 0 (0 derives it)");
  if (c.dl > 0.0 && c.l > 0.0 && c.dl >= c.l) out.push_back("dl must be smaller than l");
  if (c.R > 0.0 && c.lambda > 0.0 && c.d > 0.0 && c.d < 2.0 * c.R) {
    out.push_back(fmt::format("d must be at least 2 R so the helices do not intersect (d/R = {})", c.d / c.R));
  }
  const double w = std::max(std::abs(c.omega1), std::abs(c.omega2));
  if (w > 0.0 && c.dt > 0.0 && c.dt > 0.1 * 2.0 * kPi / w) {
    out.push_back(fmt::format("dt = {} exceeds 0.1 * 2 pi / max|omega| = {}", c.dt, 0.2 * kPi / w));
  }
  if (c.phases < 1) out.push_back("phases must be at least 1");
  if (c.threads < 0) out.push_back("threads must be >= 0");
  if (c.omega_grid.size() < 3) out.push_back("omega_grid needs at least 3 speeds");
  for (double w_i : c.omega_grid) {
    if (!(w_i > 0.0) || !std::isfinite(w_i)) {
      out.push_back("omega_grid entries must be positive");
      break;
    }
  }
  if (c.sweep_omega == 0.0 || !std::isfinite(c.sweep_omega)) out.push_back("sweep_omega must be non-zero");
  positive("sweep_lambda_over_l", c.sweep_lambda_over_l);
  positive("sweep_R_over_lambda", c.sweep_R_over_lambda);
  positive("sweep_d_over_R", c.sweep_d_over_R);
  const auto range = [&](std::string_view name, double lo, double hi, int n) {
    if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi)) {
      out.push_back(fmt::format("{} range must satisfy 0 < min <= max", name));
    }
    if (n < 1) out.push_back(fmt::format("{}_n must be at least 1", name));
  };
  range("sweep_lambda_over_l", c.sweep_lambda_over_l_min, c.sweep_lambda_over_l_max, c.sweep_lambda_over_l_n);
  range("sweep_R_over_lambda", c.sweep_R_over_lambda_min, c.sweep_R_over_lambda_max, c.sweep_R_over_lambda_n);
  range("sweep_d_over_R", c.sweep_d_over_R_min, c.sweep_d_over_R_max, c.sweep_d_over_R_n);
  return out;
}

void validate(const RunConfig& config) {
  const auto problems = violations(config);
  if (problems.empty()) return;
  std::string message = "invalid configuration:";
  for (const auto& p : problems) message += "\n  - " + p;
  throw ConfigError(message);
}

std::string to_text(const RunConfig& config) {
  std::string out;
  for (const auto& f : fields()) {
    if (f.key == "mode" && !config.mode) continue;
    out += fmt::format("{} = {}\n", f.key, f.get(config));
  }
  return out;
}

std::string value_text(const RunConfig& config, std::string_view key) { return find_field(key).get(config); }

std::vector<std::string_view> keys() {
  std::vector<std::string_view> out;
  for (const auto& f : fields()) out.push_back(f.key);
  return out;
}

geometry::RobotGeometry robot_geometry(const RunConfig& c) {
  geometry::RobotGeometry robot = geometry::default_robot();
  robot.head_radius = c.r_h;
  robot.head_height = c.h;
  robot.spacing = c.d;
  robot.com_shift = c.r_m;
  robot.head_mass = c.m_h;
  robot.discretization = c.dl;
  for (auto& f : robot.flagella) {
    f.radius = c.R;
    f.pitch = c.lambda;
    f.axial_length = c.l;
    f.cross_section_radius = c.r0;
  }
  return robot;
}

head::HeadParams head_params(const RunConfig& c) {
  head::HeadParams p;
  p.radius = c.r_h;
  p.height = c.h;
  p.mass = c.m_h;
  p.com_shift = c.r_m;
  p.translational_coeff = c.C_t;
  p.rotational_coeff = c.C_r;
  p.rotational_reference = c.h;
  p.gravity = c.g;
  p.viscosity = c.mu;
  return p;
}

dynamics::SwimmerModel swimmer_model(const RunConfig& c) {
  return dynamics::SwimmerModel(robot_geometry(c), head_params(c),
                                dynamics::InertiaModel::solid_cylinder(c.m_h, c.r_h, c.h));
}

sweep::SweepSettings sweep_settings(const RunConfig& c) {
  sweep::SweepSettings s;
  s.helix_radius = c.R;
  s.cross_section_radius = c.r0;
  s.discretization = c.dl;
  s.viscosity = c.mu;
  s.omega = c.sweep_omega;
  s.phases = c.phases;
  s.threads = c.threads;
  return s;
}

}  // namespace swimsim::config
