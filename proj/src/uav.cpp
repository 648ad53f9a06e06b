#include "probreach/uav.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace probreach::uav {
namespace {

double saturate(double v, double limit) { return std::clamp(v, -limit, limit); }

double line_course(const Line& line) { return std::atan2(line.direction(1), line.direction(0)); }

}  // namespace

double cross_track_error(const Vector& state, const Line& line) {
  require(state.size() == 4, "UAV state has 4 coordinates");
  const double chi = line_course(line);
  return -std::sin(chi) * (state(0) - line.origin(0)) + std::cos(chi) * (state(1) - line.origin(1));
}

double altitude_error(const Vector& state, const Line& line) {
  require(state.size() == 4, "UAV state has 4 coordinates");
  // Altitude of the line at the closest horizontal point.
  const double horiz = std::hypot(line.direction(0), line.direction(1));
  const Eigen::Vector2d rel(state(0) - line.origin(0), state(1) - line.origin(1));
  const double along = (rel(0) * line.direction(0) + rel(1) * line.direction(1)) / horiz;
  const double target = line.origin(2) + line.direction(2) / horiz * along;
  return target - state(2);
}

Eigen::Vector2d controller(const Vector& state, const Line& line, const GuidanceGains& gains) {
  require(state.allFinite(), "UAV controller needs a finite state");
  const double chi_line = line_course(line);
  const double e = cross_track_error(state, line);
  const double chi_cmd = chi_line - gains.chi_inf * (2.0 / std::numbers::pi) * std::atan(gains.k_path * e);
  const double roll = saturate(gains.k_course * std::sin(chi_cmd - state(3)), gains.roll_limit);
  const double gamma = saturate(gains.k_altitude * altitude_error(state, line), gains.gamma_limit);
  return {gamma, roll};
}

Vector closed_loop_step(const Vector& state, const Vector& wind, const Airframe& airframe, const Line& line,
                        const GuidanceGains& gains) {
  require(wind.size() == 3, "UAV wind input has 3 coordinates");
  const Eigen::Vector2d cmd = controller(state, line, gains);
  const double gamma = cmd(0), roll = cmd(1);
  const double v = airframe.airspeed, theta = state(3);
  Vector rate(4);
  rate << v * std::cos(theta) * std::cos(gamma) + wind(0), v * std::sin(theta) * std::cos(gamma) + wind(1),
      v * std::sin(gamma) + wind(2), airframe.gravity / v * std::tan(roll);
  return state + airframe.step * rate;
}

Matrix wind_jacobian(const Airframe& airframe) {
  Matrix j = Matrix::Zero(4, 3);
  j.topRows(3) = airframe.step * Matrix::Identity(3, 3);
  return j;
}

}  // namespace probreach::uav
