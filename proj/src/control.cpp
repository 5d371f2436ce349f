#include "swimsim/control.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace swimsim::control {

// Roots of s^2 - tr s + det, without cancellation in the smaller root.
Eigen::Vector2cd LinearPlant::eigenvalues() const {
  const double tr = state.trace();
  const double det = state.determinant();
  const double disc = tr * tr / 4.0 - det;
  if (disc < 0.0) {
    const double im = std::sqrt(-disc);
    return Eigen::Vector2cd(std::complex<double>(tr / 2.0, im), std::complex<double>(tr / 2.0, -im));
  }
  const double big = tr / 2.0 + std::copysign(std::sqrt(disc), tr);
  const double small = big != 0.0 ? det / big : 0.0;
  return Eigen::Vector2cd(big, small);
}

bool LinearPlant::stable() const { return state.trace() < 0.0 && state.determinant() > 0.0; }

LinearPlant build_plant(const geometry::RobotGeometry& robot, const head::HeadParams& head,
                        const dynamics::InertiaModel& inertia) {
  robot.validate();
  head.validate();
  inertia.validate();
  const double iy = inertia.iy;
  const double h = head.height;

  LinearPlant plant;
  plant.state << 0.0, 1.0,
      -head.mass * head.gravity * head.com_shift / iy,
      -8.0 * kPi * head.rotational_coeff * head.viscosity * h * h * h / iy;
  const double gain = robot.spacing / (2.0 * iy);
  plant.input << 0.0, 0.0, gain, -gain;
  return plant;
}

SteadyState steady_state(const LinearPlant& plant, double f1, double f2, const head::HeadParams& head,
                         double spacing) {
  const double stiffness = head.mass * head.gravity * head.com_shift;
  if (!(stiffness > 0.0)) {
    throw InvalidArgument("no finite steady state: righting stiffness m g r_m is zero");
  }
  if (!plant.stable()) throw InvalidArgument("plant is not stable");

  const double moment = (f1 - f2) * spacing / 2.0;
  SteadyState ss;
  ss.beta = moment / stiffness;
  ss.beta_dot = 0.0;
  const double ratio = moment / stiffness;
  ss.beta_sin_corrected = std::abs(ratio) <= 1.0 ? std::asin(ratio) : std::numeric_limits<double>::quiet_NaN();
  return ss;
}

namespace {

double fit_through_origin(const std::vector<double>& x, const std::vector<double>& y) {
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += x[i] * y[i];
    sxx += x[i] * x[i];
  }
  return sxy / sxx;
}

double relative_rms(const std::vector<double>& x, const std::vector<double>& y, double slope) {
  double err = 0.0;
  double ref = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - slope * x[i];
    err += e * e;
    ref += y[i] * y[i];
  }
  return ref > 0.0 ? std::sqrt(err / ref) : 0.0;
}

}  // namespace

PropulsionCalibration calibrate_propulsion(const geometry::RobotGeometry& robot, double viscosity,
                                           std::span<const double> omega_grid, int phases) {
  if (omega_grid.size() < 3) throw InvalidArgument("calibration needs at least three speeds");
  PropulsionCalibration cal;
  std::vector<double> omega2;
  for (double w : omega_grid) {
    if (w == 0.0 || !std::isfinite(w)) throw InvalidArgument("calibration speeds must be finite and non-zero");
    const dynamics::PairResponse r = dynamics::steady_rotation_response(robot, viscosity, w, -w, phases);
    cal.omegas.push_back(w);
    omega2.push_back(-w);
    cal.thrust1.push_back(geometry::axial_thrust(r.force[0]));
    cal.thrust2.push_back(geometry::axial_thrust(r.force[1]));
  }
  cal.k1 = fit_through_origin(cal.omegas, cal.thrust1);
  cal.k2 = fit_through_origin(omega2, cal.thrust2);
  cal.residual = std::max(relative_rms(cal.omegas, cal.thrust1, cal.k1), relative_rms(omega2, cal.thrust2, cal.k2));
  return cal;
}

double default_force_limit(const PropulsionCalibration& cal, double omega_max) {
  return std::min(std::abs(cal.k1), std::abs(cal.k2)) * omega_max;
}

SpeedSolution solve_speeds(double beta_ref, const PropulsionCalibration& cal, const head::HeadParams& head,
                           double spacing, double force_limit) {
  if (!std::isfinite(beta_ref)) throw InvalidArgument("reference pitch must be finite");
  if (!(force_limit > 0.0)) throw InvalidArgument("thrust limit must be positive");
  if (cal.k1 == 0.0 || cal.k2 == 0.0) throw InvalidArgument("calibration slopes must be non-zero");
  const double stiffness = head.mass * head.gravity * head.com_shift;
  if (!(stiffness > 0.0)) throw InvalidArgument("righting stiffness m g r_m must be positive");

  SpeedSolution sol;
  sol.beta_max = force_limit * spacing / stiffness;
  // f1 = -f2 = f with f d / (m g r_m) = beta_ref.
  const double thrust = stiffness * beta_ref / spacing;
  if (std::abs(thrust) > force_limit) {
    std::ostringstream msg;
    msg << "reference pitch " << beta_ref << " rad needs thrust " << std::abs(thrust) << " N above the limit "
        << force_limit << " N; largest reachable pitch is " << sol.beta_max << " rad";
    throw InfeasibleReference(msg.str(), sol.beta_max);
  }
  sol.thrust1 = thrust;
  sol.thrust2 = -thrust;
  sol.omega1 = sol.thrust1 / cal.k1;
  sol.omega2 = sol.thrust2 / cal.k2;
  if (sol.omega1 == 0.0) sol.omega1 = 0.0;  // no negative zero in reports
  if (sol.omega2 == 0.0) sol.omega2 = 0.0;
  return sol;
}

}  // namespace swimsim::control
