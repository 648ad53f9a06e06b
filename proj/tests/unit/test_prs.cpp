#include <doctest.h>

#include <cmath>

#include "probreach/prs.hpp"

using namespace probreach;

namespace {

ReachSet unit_box() { return IntervalBox(Vector::Zero(2), Vector::Ones(2)); }

ProbabilisticReachSet with_inflation(ReachSet base, double inflation) {
  ProbabilisticReachSet p{std::move(base), inflation, 0.1, 1};
  return p;
}

}  // namespace

TEST_CASE("membership examples") {
  const auto box = with_inflation(unit_box(), 0.5);
  const auto c = membership(box, Vector::Constant(2, 0.5));
  CHECK(c.inside);
  CHECK(c.distance == 0.0);
  Vector x(2);
  x << 1.3, 0.4;
  const auto m = membership(box, x);
  CHECK(m.inside);
  CHECK(m.distance == doctest::Approx(0.3).epsilon(1e-12));

  const auto ball = with_inflation(BallSet(Vector::Zero(2), 1.0), 0.2);
  Vector y(2);
  y << 0.75, 1.0;  // norm 1.25
  const auto b = membership(ball, y);
  CHECK_FALSE(b.inside);
  CHECK(b.margin == doctest::Approx(-0.05).epsilon(1e-12));

  // zero distance is inside regardless of inflation
  CHECK(membership(with_inflation(unit_box(), 0.0), Vector::Ones(2)).inside);
}

TEST_CASE("make_prs examples") {
  const auto e = epsilon_constants(1.0 / 16.0);
  const auto quiet = constant_schedule(0.9, 0.0, 5);
  const auto p = make_prs(unit_box(), quiet, 2, 1e-3, e, 3);
  CHECK(p.inflation == 0.0);
  const auto point = make_prs(IntervalBox::point(Vector::Zero(2)), constant_schedule(0.93, 0.2, 5), 2, 1e-3, e, 0);
  CHECK(p.t == 3);
  CHECK(point.inflation == 0.0);
  CHECK(membership(point, Vector::Zero(2)).inside);
  CHECK_FALSE(membership(point, Vector::Constant(2, 1e-9)).inside);
}

TEST_CASE("nesting in delta") {
  const auto e = epsilon_constants(1.0 / 16.0);
  const auto s = constant_schedule(0.93, 0.2, 5);
  const auto loose = make_prs(unit_box(), s, 2, 1e-1, e, 4), tight = make_prs(unit_box(), s, 2, 1e-4, e, 4);
  CHECK(tight.inflation >= loose.inflation);
  for (double a = -3.0; a <= 4.0; a += 0.05)
    for (double b = -3.0; b <= 4.0; b += 0.05) {
      Vector x(2);
      x << a, b;
      if (membership(loose, x).inside) CHECK(membership(tight, x).inside);
    }
}

TEST_CASE("distance matches a grid projection") {
  Vector w(2);
  w << 1.0, 4.0;
  const std::vector<ReachSet> bases{unit_box(), BallSet(Vector::Zero(2), 1.0),
                                    BallSet(Vector::Constant(2, 0.5), 0.7, NormSpec::diagonal(w))};
  const std::vector<Vector> probes{(Vector(2) << 1.7, -0.4).finished(), (Vector(2) << -2.0, 2.5).finished(),
                                   (Vector(2) << 0.2, 0.9).finished(), (Vector(2) << 3.0, 0.5).finished()};
  for (const auto& base : bases) {
    // frame of the inflation ball: weighted balls measure in their own norm
    const NormSpec frame = std::holds_alternative<BallSet>(base) ? std::get<BallSet>(base).norm() : NormSpec(2);
    // nearest point of a convex set from outside lies on its boundary
    std::vector<Vector> boundary;
    const int N = 200000;
    for (int k = 0; k < N; ++k) {
      const double s = static_cast<double>(k) / N;
      if (const auto* ball = std::get_if<BallSet>(&base)) {
        const Vector v = (Vector(2) << std::cos(2.0 * M_PI * s), std::sin(2.0 * M_PI * s)).finished();
        boundary.push_back(ball->center() + ball->radius() * ball->norm().inverse_transform() * v);
      } else {
        const double e = 4.0 * s;
        const int side = static_cast<int>(e);
        const double f = e - side;
        const Vector corner[4] = {(Vector(2) << f, 0.0).finished(), (Vector(2) << 1.0, f).finished(),
                                  (Vector(2) << 1.0 - f, 1.0).finished(), (Vector(2) << 0.0, 1.0 - f).finished()};
        boundary.push_back(corner[side]);
      }
    }
    for (const auto& x : probes) {
      double best = set_contains(base, x) ? 0.0 : INFINITY;
      if (best > 0.0)
        for (const auto& y : boundary) best = std::min(best, frame(x - y));
      CHECK(std::abs(distance_to(base, x) - best) <= 1e-3);
    }
  }
}
