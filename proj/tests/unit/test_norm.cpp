#include <doctest.h>

#include <random>

#include "probreach/norm.hpp"
#include "probreach/rng.hpp"
#include "probreach/sets.hpp"

using namespace probreach;

TEST_CASE("weighted_norm examples") {
  CHECK(weighted_norm(Vector::Zero(3), NormSpec(3)) == 0.0);
  Vector x(2);
  x << 3.0, 4.0;
  CHECK(weighted_norm(x, NormSpec(2)) == doctest::Approx(5.0).epsilon(1e-15));
  Vector p(4);
  p << 1.0, 1.0, 100.0, 50.0;
  const NormSpec w = NormSpec::diagonal(p);
  CHECK(weighted_norm(Vector::Unit(4, 0), w) == 1.0);
  CHECK(weighted_norm(Vector::Unit(4, 2), w) == doctest::Approx(10.0));
  CHECK_THROWS(weighted_norm(Vector::Zero(3), w));
}

TEST_CASE("transform invariants on random SPD matrices") {
  Rng rng(3);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    Matrix a(4, 4);
    for (Eigen::Index i = 0; i < 16; ++i) a.data()[i] = g(rng);
    const Matrix P = a * a.transpose() + 0.5 * Matrix::Identity(4, 4);
    const NormSpec n(P);
    const Matrix& T = n.transform();
    CHECK((T.transpose() * T - P).norm() <= 1e-10 * P.norm());
    for (int k = 0; k < 50; ++k) {
      Vector x(4);
      for (Eigen::Index i = 0; i < 4; ++i) x(i) = g(rng);
      const double direct = std::sqrt(x.dot(P * x));
      CHECK(std::abs(n(x) - direct) <= 1e-12 * direct);
      CHECK((n.from_frame(n.to_frame(x)) - x).norm() <= 1e-12 * x.norm());
    }
  }
}

TEST_CASE("rejects non-SPD weights") {
  Matrix bad(2, 2);
  bad << 1.0, 2.0, 0.0, 1.0;
  CHECK_THROWS_AS(NormSpec{bad}, std::invalid_argument);
  Matrix neg = -Matrix::Identity(2, 2);
  CHECK_THROWS_AS(NormSpec{neg}, std::invalid_argument);
}

TEST_CASE("induced norm") {
  Matrix a = -0.93 * Matrix::Identity(2, 2);
  CHECK(induced_norm(a, NormSpec(2), NormSpec(2)) == doctest::Approx(0.93));
  Vector p(2);
  p << 1.0, 100.0;
  Matrix e = Matrix::Identity(2, 2);
  CHECK(induced_norm(e, NormSpec::diagonal(p), NormSpec::diagonal(p)) == doctest::Approx(1.0));
}

TEST_CASE("sets: ball and box radius, sampling") {
  Vector lo(2), hi(2);
  lo << 9.195, 3.595;
  hi << 9.205, 3.605;
  const ReachSet box = IntervalBox(lo, hi);
  CHECK(set_radius(box, NormSpec(2)) == doctest::Approx(5.0 * std::sqrt(2.0) * 1e-3).epsilon(1e-12));
  Rng rng(5);
  for (int k = 0; k < 1000; ++k) CHECK(set_contains(box, sample_uniform(box, rng)));
  Vector w(2);
  w << 1.0, 4.0;
  const ReachSet ball = BallSet(Vector::Zero(2), 2.0, NormSpec::diagonal(w));
  for (int k = 0; k < 1000; ++k) CHECK(std::get<BallSet>(ball).norm()(sample_uniform(ball, rng)) <= 2.0 + 1e-12);
  // Euclidean radius of the weighted ball: semi-axis along x0 is 2.
  CHECK(set_radius(ball, NormSpec(2)) == doctest::Approx(2.0));
}
