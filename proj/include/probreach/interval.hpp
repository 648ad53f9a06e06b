#pragma once

#include <cmath>
#include <iosfwd>
#include <vector>

#include "probreach/core.hpp"

namespace probreach {

/// Closed real interval [lo, hi]. Arithmetic is the natural interval
/// extension of each primitive; transcendental primitives are widened one
/// ulp outward because libm does not promise monotone rounding.
class Interval {
 public:
  constexpr Interval() = default;
  constexpr Interval(double v) : lo_(v), hi_(v) {}  // NOLINT: degenerate interval
  Interval(double lo, double hi);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double width() const noexcept { return hi_ - lo_; }
  double mid() const noexcept { return 0.5 * (lo_ + hi_); }
  bool contains(double x) const noexcept { return lo_ <= x && x <= hi_; }
  bool subset_of(const Interval& other) const noexcept { return other.lo_ <= lo_ && hi_ <= other.hi_; }
  bool degenerate() const noexcept { return lo_ == hi_; }

  friend Interval operator+(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a, const Interval& b);
  friend Interval operator*(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a);
  friend bool operator==(const Interval& a, const Interval& b) = default;

 private:
  double lo_ = 0.0;
  double hi_ = 0.0;
};

std::ostream& operator<<(std::ostream& os, const Interval& x);

Interval hull(const Interval& a, const Interval& b);
Interval sqr(const Interval& x);
/// x^p. Integer p uses the sign-aware rule; other p require x ≥ 0 (> 0 for p < 0).
Interval pow(const Interval& x, double p);
Interval log1p(const Interval& x);
Interval sin(const Interval& x);
Interval cos(const Interval& x);
/// Requires the interval to avoid every pole π/2 + kπ.
Interval tan(const Interval& x);
Interval min(const Interval& a, const Interval& b);
Interval max(const Interval& a, const Interval& b);

/// Axis-aligned box [lower, upper] ⊂ R^n.
class IntervalBox {
 public:
  IntervalBox() = default;
  IntervalBox(Vector lower, Vector upper);
  explicit IntervalBox(const std::vector<Interval>& components);
  static IntervalBox point(const Vector& x) { return IntervalBox(x, x); }

  std::size_t dim() const noexcept { return static_cast<std::size_t>(lower_.size()); }
  const Vector& lower() const noexcept { return lower_; }
  const Vector& upper() const noexcept { return upper_; }
  Interval operator[](std::size_t i) const { return Interval(lower_(i), upper_(i)); }
  std::vector<Interval> components() const;
  Vector center() const { return 0.5 * (lower_ + upper_); }
  Vector widths() const { return upper_ - lower_; }
  bool contains(const Vector& x) const;
  bool subset_of(const IntervalBox& other) const;

 private:
  Vector lower_;
  Vector upper_;
};

}  // namespace probreach
