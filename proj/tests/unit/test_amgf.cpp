#include <doctest.h>

#include <cmath>
#include <random>

#include "probreach/amgf.hpp"
#include "probreach/rng.hpp"

using namespace probreach;

TEST_CASE("amgf examples") {
  for (std::size_t n = 1; n <= 10; ++n) CHECK(amgf(n, 1.7, 0.0) == 1.0);
  CHECK(amgf(1, 1.0, 1.0) == doctest::Approx(std::cosh(1.0)).epsilon(1e-14));
  CHECK(amgf(1, 1.0, 1.0) == doctest::Approx(1.5431).epsilon(1e-4));
  CHECK(amgf(3, 2.0, 1.0) == doctest::Approx(std::sinh(2.0) / 2.0).epsilon(1e-14));
  CHECK(amgf(3, 2.0, 1.0) == doctest::Approx(1.8134).epsilon(1e-4));
  CHECK_THROWS(amgf(0, 1.0, 1.0));
}

TEST_CASE("quadrature oracle") {
  CHECK(amgf_quadrature_oracle(2, 1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  for (double lr : {0.5, 2.0, 7.0, 20.0})
    CHECK(std::abs(amgf_quadrature_oracle(3, lr, 1.0) / (std::sinh(lr) / lr) - 1.0) <= 1e-8);
  const AmgfEvaluator series(2, AmgfMethod::bessel_series);
  CHECK(std::abs(amgf_quadrature_oracle(2, 5.0, 1.0) / series(5.0, 1.0) - 1.0) <= 1e-8);
  CHECK_THROWS(amgf_quadrature_oracle(1, 1.0, 1.0));
  CHECK_THROWS(amgf_quadrature_oracle(2, 1.0, 1.0, 32));
}

TEST_CASE("series agrees with quadrature, n in 2..10, lambda r up to 30") {
  double worst = 0.0;
  for (std::size_t n = 2; n <= 10; ++n) {
    const AmgfEvaluator series(n, AmgfMethod::bessel_series);
    for (double lr = 0.0; lr <= 30.0; lr += 0.25) {
      const double q = amgf_quadrature_oracle(n, lr, 1.0);
      worst = std::max(worst, std::abs(series(lr, 1.0) - q) / q);
    }
  }
  CHECK(worst <= 1e-7);
}

TEST_CASE("symmetry and monotonicity") {
  for (std::size_t n : {1u, 2u, 3u, 5u, 9u}) {
    for (double lambda : {-2.0, -0.3, 0.7, 3.0}) {
      double prev = amgf(n, lambda, 0.0);
      for (double r = 0.05; r <= 50.0 / std::abs(lambda); r += 0.05 / std::abs(lambda)) {
        const double v = amgf(n, lambda, r);
        CHECK(v > prev);
        CHECK(v == doctest::Approx(amgf(n, -lambda, r)).epsilon(1e-15));
        prev = v;
      }
    }
  }
}

TEST_CASE("vector form is rotation invariant") {
  Rng rng(8);
  std::normal_distribution<double> g;
  const AmgfEvaluator phi(4);
  for (int k = 0; k < 100; ++k) {
    Vector x(4);
    for (Eigen::Index i = 0; i < 4; ++i) x(i) = g(rng);
    Matrix a(4, 4);
    for (Eigen::Index i = 0; i < 16; ++i) a.data()[i] = g(rng);
    const Matrix q = Eigen::HouseholderQR<Matrix>(a).householderQ();
    const double v1 = amgf_quadrature_oracle(4, 1.3, x.norm()), v2 = amgf_quadrature_oracle(4, 1.3, (q * x).norm());
    CHECK(std::abs(v1 - v2) <= 1e-10 * v1);
    CHECK(phi(1.3, x) == doctest::Approx(phi(1.3, q * x)).epsilon(1e-12));
  }
}

TEST_CASE("decoupling examples") {
  const Vector x = Vector::Constant(3, 0.4);
  const auto none = verify_decoupling(3, 1.2, 0.0, x, 1000);
  CHECK(none.lhs == doctest::Approx(none.rhs).epsilon(1e-12));
  CHECK(none.pass);
  const auto flat = verify_decoupling(3, 0.0, 0.8, x, 1000);
  CHECK(flat.lhs == doctest::Approx(1.0));
  CHECK(flat.rhs == doctest::Approx(1.0));
  const auto zero = verify_decoupling(4, 1.0, 0.6, Vector::Zero(4), 100000);
  CHECK(zero.pass);
  CHECK(zero.rhs == doctest::Approx(std::exp(0.18)));
  CHECK(verify_decoupling(4, 1.0, 0.6, Vector::Zero(4), 20000, TestNoise::uniform).pass);
}

TEST_CASE("norm concentration examples") {
  const auto g = verify_norm_concentration(2, 1.0, 1e-2, 1.0 / 16.0, 100000);
  CHECK(g.rate <= 0.013);
  CHECK(g.pass);
  const auto z = verify_norm_concentration(3, 0.0, 1e-2, 1.0 / 16.0, 1000);
  CHECK(z.violations == 0);
  const auto u = verify_norm_concentration(3, 1.0, 1e-2, 1.0 / 16.0, 100000, TestNoise::uniform);
  CHECK(u.rate <= 1e-2);
}
