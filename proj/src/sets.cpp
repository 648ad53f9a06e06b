#include "probreach/sets.hpp"

#include <cmath>

namespace probreach {

BallSet::BallSet(Vector center, double radius, NormSpec norm)
    : center_(std::move(center)), radius_(radius), norm_(std::move(norm)) {
  require(std::isfinite(radius_) && radius_ >= 0.0, "ball radius must be finite and non-negative");
  require(center_.allFinite(), "ball center must be finite");
  require(static_cast<std::size_t>(center_.size()) == norm_.dim(), "ball center and norm dimensions differ");
}

bool BallSet::contains(const Vector& x, double tol) const { return norm_(x - center_) <= radius_ + tol; }

std::size_t set_dim(const ReachSet& s) {
  return std::visit([](const auto& v) { return v.dim(); }, s);
}

Vector set_center(const ReachSet& s) {
  return std::visit([](const auto& v) -> Vector { return v.center(); }, s);
}

bool set_contains(const ReachSet& s, const Vector& x) {
  return std::visit([&](const auto& v) { return v.contains(x); }, s);
}

Vector sample_uniform(const ReachSet& s, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (const auto* box = std::get_if<IntervalBox>(&s)) {
    Vector x(box->dim());
    for (std::size_t i = 0; i < box->dim(); ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      x(k) = box->lower()(k) + unit(rng) * (box->upper()(k) - box->lower()(k));
    }
    return x;
  }
  const auto& ball = std::get<BallSet>(s);
  const auto n = static_cast<Eigen::Index>(ball.dim());
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector dir(n);
  for (Eigen::Index i = 0; i < n; ++i) dir(i) = normal(rng);
  const double len = dir.norm();
  if (len == 0.0) return ball.center();
  const double r = ball.radius() * std::pow(unit(rng), 1.0 / static_cast<double>(n));
  return ball.center() + ball.norm().from_frame(dir * (r / len));
}

double set_radius(const ReachSet& s, const NormSpec& norm) {
  if (const auto* ball = std::get_if<BallSet>(&s)) {
    if (ball->norm().is_euclidean() && norm.is_euclidean()) return ball->radius();
    // ‖T_norm T_ball^{-1} z‖ over ‖z‖ ≤ r
    const Matrix m = norm.transform() * ball->norm().inverse_transform();
    Eigen::JacobiSVD<Matrix> svd(m);
    return ball->radius() * svd.singularValues()(0);
  }
  const auto& box = std::get<IntervalBox>(s);
  const Vector half = 0.5 * box.widths();
  if (norm.is_diagonal()) return std::sqrt(half.cwiseProduct(half).dot(norm.weight().diagonal()));
  // Convex norm: the supremum sits at a vertex.
  require(box.dim() <= 20, "set_radius: box too high-dimensional for vertex enumeration");
  double best = 0.0;
  const std::size_t n = box.dim();
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    Vector v = half;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::size_t{1} << i)) v(static_cast<Eigen::Index>(i)) = -v(static_cast<Eigen::Index>(i));
    best = std::max(best, norm(v));
  }
  return best;
}

}  // namespace probreach
