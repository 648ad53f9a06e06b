#pragma once

#include <variant>

#include "probreach/interval.hpp"
#include "probreach/norm.hpp"
#include "probreach/rng.hpp"

namespace probreach {

/// {x : ‖x − center‖ ≤ radius} in the given norm.
class BallSet {
 public:
  BallSet(Vector center, double radius, NormSpec norm);
  BallSet(Vector center, double radius) : BallSet(center, radius, NormSpec(static_cast<std::size_t>(center.size()))) {}

  const Vector& center() const noexcept { return center_; }
  double radius() const noexcept { return radius_; }
  const NormSpec& norm() const noexcept { return norm_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(center_.size()); }
  bool contains(const Vector& x, double tol = 0.0) const;

 private:
  Vector center_;
  double radius_;
  NormSpec norm_;
};

using ReachSet = std::variant<BallSet, IntervalBox>;

std::size_t set_dim(const ReachSet& s);
Vector set_center(const ReachSet& s);
bool set_contains(const ReachSet& s, const Vector& x);
/// Uniform sample (uniform in the norm frame for balls).
Vector sample_uniform(const ReachSet& s, Rng& rng);
/// sup over the set of ‖y − set_center‖ measured in `norm`.
double set_radius(const ReachSet& s, const NormSpec& norm);

}  // namespace probreach
