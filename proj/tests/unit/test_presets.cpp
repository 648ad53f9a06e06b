#include <doctest.h>

#include <cmath>
#include <fstream>

#include "probreach/presets.hpp"

using namespace probreach;
using nlohmann::json;

namespace {

json fixture() {
  std::ifstream in(std::string(PROBREACH_FIXTURES) + "/presets.json");
  REQUIRE(in.good());
  return json::parse(in);
}

void check_vector(const Vector& v, const json& expect) {
  REQUIRE(static_cast<std::size_t>(v.size()) == expect.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) CHECK(v(i) == doctest::Approx(expect[i].get<double>()).epsilon(1e-15));
}

}  // namespace

TEST_CASE("linear preset matches the fixture") {
  const auto f = fixture()["linear"];
  const auto p = make_preset("linear");
  CHECK(p.model.dim_state() == f["dim"].get<std::size_t>());
  CHECK(p.model.lipschitz(0) == f["lipschitz"].get<double>());
  CHECK(p.noise.closed_form_sigma(p.norm) == doctest::Approx(std::sqrt(f["noise_variance"].get<double>())));
  CHECK(p.horizon == f["horizon"].get<std::size_t>());
  CHECK(p.delta == f["delta"].get<double>());
  CHECK(p.epsilon == f["epsilon"].get<double>());
  CHECK(p.trajectories == f["trajectories"].get<std::size_t>());
  check_vector(set_center(p.initial_set), f["x0"]);
  Vector x(2);
  x << 1.0, -2.0;
  CHECK(p.model.step(x, Vector(0), 0) == f["A_diagonal"].get<double>() * x);
  CHECK(make_preset("linear8").model.dim_state() == 8);
}

TEST_CASE("cobweb preset matches the fixture") {
  const auto f = fixture()["cobweb"];
  const auto p = make_preset("cobweb");
  const auto& box = std::get<IntervalBox>(p.initial_set);
  check_vector(box.lower(), f["initial_lower"]);
  check_vector(box.upper(), f["initial_upper"]);
  CHECK(set_radius(p.initial_set, p.norm) == doctest::Approx(f["r1"].get<double>()).epsilon(1e-12));
  CHECK(p.horizon == f["horizon"].get<std::size_t>());
  CHECK(p.delta == f["delta"].get<double>());
  CHECK(p.epsilon == f["epsilon"].get<double>());
  CHECK(p.trajectories == f["trajectories"].get<std::size_t>());
  const double a = f["a"], b = f["b"], c = f["c"], d = f["d"];
  Vector x(2);
  x << 9.2, 3.6;
  const Vector y = p.model.step(x, Vector(0), 0);
  CHECK(y(0) == doctest::Approx(a - b * std::log(1.0 + 3.6)).epsilon(1e-14));
  CHECK(y(1) == doctest::Approx(c * y(0) - d).epsilon(1e-14));
  CHECK(p.noise.scales()(0) == doctest::Approx(std::sqrt(f["noise_variance"].get<double>())));
  for (const auto& [k, v] : f.items())
    if (p.parameters.contains(k) && v.is_number()) CHECK(p.parameters[k].get<double>() == doctest::Approx(v.get<double>()));
}

TEST_CASE("uav preset matches the fixture") {
  const auto f = fixture()["uav"];
  const auto p = make_preset("uav");
  check_vector(set_center(p.initial_set), f["x0"]);
  check_vector(p.norm.weight().diagonal(), f["P_diagonal"]);
  CHECK(p.horizon == f["horizon"].get<std::size_t>());
  CHECK(p.delta == f["delta"].get<double>());
  CHECK(p.epsilon == f["epsilon"].get<double>());
  CHECK(p.trajectories == f["trajectories"].get<std::size_t>());
  CHECK(p.input_policy == InputPolicy::uniform);
  const auto& wind = std::get<IntervalBox>(p.model.input_set());
  CHECK(wind.upper()(0) == f["wind_bound"].get<double>());
  for (const auto& [k, v] : f["gains"].items()) CHECK(p.parameters["gains"][k].get<double>() == v.get<double>());
  const uav::GuidanceGains g;
  CHECK(g.k_path == f["gains"]["k_path"].get<double>());
  CHECK(g.k_course == f["gains"]["k_course"].get<double>());
  const uav::Airframe af;
  CHECK(af.airspeed == f["airspeed"].get<double>());
  CHECK(af.gravity == f["gravity"].get<double>());
  CHECK(af.step == f["eta"].get<double>());
}

TEST_CASE("preset lookup and custom systems") {
  CHECK_THROWS_AS(make_preset("nope"), ConfigError);
  CHECK_THROWS_AS(make_preset("linear0"), ConfigError);
  const json spec = {
      {"name", "toy"},
      {"dim_state", 1},
      {"parameters", {{"k", 0.5}}},
      {"dynamics", json::array({json::array({"mul", "k", "x0"})})},
      {"lipschitz", 0.5},
      {"noise", {{"kind", "gaussian"}, {"scales", {0.1}}}},
      {"initial_set", {{"lower", {-1.0}}, {"upper", {1.0}}}},
      {"horizon", 4},
  };
  const auto p = load_custom_system(spec);
  CHECK(p.name == "toy");
  CHECK(p.horizon == 4);
  CHECK(p.delta == 1e-3);
  CHECK(p.epsilon == 1.0 / 16.0);
  CHECK(p.model.step(Vector::Constant(1, 2.0), Vector(0), 0)(0) == 1.0);
  json bad = spec;
  bad["dynamics"] = json::array({json::array({"mul", "k", "x3"})});
  CHECK_THROWS_AS(load_custom_system(bad), ConfigError);
  bad = spec;
  bad.erase("dim_state");
  CHECK_THROWS_AS(load_custom_system(bad), ConfigError);
  CHECK_THROWS_AS(load_custom_system_file("/nonexistent/system.json"), ConfigError);
}
