#include <doctest.h>

#include <cmath>

#include "probreach/expr.hpp"

using namespace probreach;
using nlohmann::json;

TEST_CASE("expressions evaluate and round-trip through JSON") {
  const std::map<std::string, double> params{{"a", 10.0}, {"b", 1.5}};
  const json j = json::array({"sub", "a", json::array({"mul", "b", json::array({"log1p", "x1"})})});
  const Expr e = Expr::from_json(j, params);
  const double x[2] = {0.0, 3.6};
  CHECK(e.eval(std::span<const double>(x, 2), {}) == doctest::Approx(10.0 - 1.5 * std::log1p(3.6)));
  const Expr back = Expr::from_json(e.to_json());
  CHECK(back.eval(std::span<const double>(x, 2), {}) == e.eval(std::span<const double>(x, 2), {}));
  CHECK(e.state_arity() == 2);
  CHECK(e.input_arity() == 0);
}

TEST_CASE("compiled tape matches tree evaluation bit for bit") {
  const Expr x0 = Expr::state(0), x1 = Expr::state(1), u0 = Expr::input(0);
  const std::vector<Expr> exprs{
      x0 * x1 - Expr(2.0) * u0,     pow(x0, 2.0) + pow(x1, 3.0), sin(x0) * cos(x1) + tan(Expr(0.3) * x0),
      min(x0, x1) - max(x0, -x1), log1p(x1 * x1), -(x0 - x1),
  };
  for (const auto& e : exprs) {
    const CompiledExpr c(e);
    for (double a : {-1.3, 0.0, 0.7, 2.5})
      for (double b : {-0.4, 0.2, 1.9}) {
        const double xs[2] = {a, b}, us[1] = {0.25};
        CHECK(c(xs, us) == e.eval(std::span<const double>(xs, 2), std::span<const double>(us, 1)));
      }
  }
}

TEST_CASE("interval evaluation contains point evaluation") {
  const Expr e = Expr(10.0) - Expr(1.5) * log1p(Expr::state(1));
  const Interval xs[2] = {Interval(9.195, 9.205), Interval(3.595, 3.605)};
  const Interval img = e.eval(std::span<const Interval>(xs, 2), {});
  // decreasing in q: endpoints swap
  CHECK(img.lo() <= 10.0 - 1.5 * std::log1p(3.605));
  CHECK(img.hi() >= 10.0 - 1.5 * std::log1p(3.595));
  CHECK(img.width() < 1e-2);
}

TEST_CASE("malformed expressions are rejected") {
  CHECK_THROWS(Expr::from_json(json::array({"frobnicate", "x0"})));
  CHECK_THROWS(Expr::from_json("y3"));
  CHECK_THROWS(Expr::from_json(json::array({"add", "x0"})));
  CHECK_THROWS(Expr::from_json(json::array({"pow", "x0", "x1"})));
  CHECK_THROWS(Expr::from_json(json::object()));
}
