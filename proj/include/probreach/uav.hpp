#pragma once

#include "probreach/core.hpp"

namespace probreach::uav {

/// Kinematic fixed-wing model x = (p_north, p_east, altitude, heading):
///   x⁺ = x + η (v cosθ cosγ + u_x, v sinθ cosγ + u_y, v sinγ + u_z, (g/v) tan φ)
struct Airframe {
  double airspeed = 13.0;
  double gravity = 9.8;
  double step = 0.1;  // η
};

/// Straight line origin + α·direction, α ≥ 0.
struct Line {
  Vector origin = (Vector(3) << 0.0, 0.0, 3.0).finished();
  Vector direction = (Vector(3) << 1.0, 1.0, 0.0).finished();
};

/// Saturated vector-field line follower. Commanded course
/// χ_c = χ_line − χ_∞ (2/π) atan(k_path e), roll φ = sat(k_course sin(χ_c − θ)),
/// flight-path angle γ = sat(k_altitude (h_line − h)). The sine keeps the
/// closed loop Lipschitz across the ±π heading seam.
struct GuidanceGains {
  double k_path = 0.05;
  double chi_inf = 0.7853981633974483;  // π/4
  double k_course = 2.0;
  double k_altitude = 0.02;
  double roll_limit = 0.7853981633974483;   // 45°
  double gamma_limit = 0.2617993877991494;  // 15°
};

/// (γ, φ) command.
Eigen::Vector2d controller(const Vector& state, const Line& line, const GuidanceGains& gains);

/// Signed lateral distance from the line in the horizontal plane.
double cross_track_error(const Vector& state, const Line& line);
/// Line altitude minus current altitude.
double altitude_error(const Vector& state, const Line& line);

/// Closed-loop step with wind input u ∈ R³.
Vector closed_loop_step(const Vector& state, const Vector& wind, const Airframe& airframe, const Line& line,
                        const GuidanceGains& gains);

/// ∂f/∂u of the closed loop (constant: η on the position rows).
Matrix wind_jacobian(const Airframe& airframe);

}  // namespace probreach::uav
