#include <doctest.h>

#include <cmath>
#include <numbers>

#include "probreach/presets.hpp"
#include "probreach/uav.hpp"

using namespace probreach;

TEST_CASE("controller examples") {
  const uav::Line line;
  const uav::GuidanceGains gains;
  Vector on(4);
  on << 2.0, 2.0, 3.0, std::numbers::pi / 4.0;
  const auto u = uav::controller(on, line, gains);
  CHECK(std::abs(u(0)) < 1e-12);
  CHECK(std::abs(u(1)) < 1e-12);
  CHECK(uav::cross_track_error(on, line) == doctest::Approx(0.0).epsilon(1e-12));

  Vector low = on;
  low(2) = 0.0;
  CHECK(uav::controller(low, line, gains)(0) > 0.0);
  CHECK(uav::altitude_error(low, line) == doctest::Approx(3.0));
  low(2) = -1e4;
  CHECK(uav::controller(low, line, gains)(0) == doctest::Approx(gains.gamma_limit));
  Vector off = on;
  off(3) = -std::numbers::pi / 2.0;
  CHECK(std::abs(uav::controller(off, line, gains)(1)) <= gains.roll_limit);
}

TEST_CASE("closed loop converges to the line without noise") {
  const uav::Line line;
  const uav::GuidanceGains gains;
  const uav::Airframe af;
  Vector x(4);
  x << 5.0, 4.5, 0.0, 5.0 * std::numbers::pi / 18.0;
  std::vector<double> err;
  for (std::size_t t = 0; t <= 200; ++t) {
    err.push_back(std::abs(uav::cross_track_error(x, line)) + std::abs(uav::altitude_error(x, line)));
    x = uav::closed_loop_step(x, Vector::Zero(3), af, line, gains);
  }
  for (std::size_t t = 51; t <= 200; ++t) CHECK(err[t] < err[t - 1]);
  CHECK(err[200] < 0.05 * err[0]);
}

TEST_CASE("wind jacobian") {
  const Matrix j = uav::wind_jacobian(uav::Airframe{});
  CHECK(j.rows() == 4);
  CHECK(j.cols() == 3);
  CHECK(j(0, 0) == doctest::Approx(0.1));
  CHECK(j.row(3).isZero());
  const auto p = uav_preset();
  CHECK(p.input_lipschitz == doctest::Approx(0.1));
}
