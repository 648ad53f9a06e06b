#include "probreach/interval.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

namespace probreach {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Critical points closer than this to an endpoint count as inside; including
// a spurious extremum only widens the result.
constexpr double kCritSlack = 1e-12;

double down(double x) { return std::nextafter(x, -kInf); }
double up(double x) { return std::nextafter(x, kInf); }

Interval outward(double lo, double hi) { return Interval(down(lo), up(hi)); }

bool is_integer(double p) { return std::isfinite(p) && std::floor(p) == p && std::abs(p) < 1e9; }

// True if some c + k·period (k integer) lies in [lo - slack, hi + slack].
bool hits(double lo, double hi, double c, double period) {
  const double k = std::ceil((lo - kCritSlack - c) / period);
  return c + k * period <= hi + kCritSlack;
}

}  // namespace

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!(lo <= hi)) {
    std::ostringstream os;
    os << "invalid interval [" << lo << ", " << hi << "]";
    throw std::invalid_argument(os.str());
  }
}

std::ostream& operator<<(std::ostream& os, const Interval& x) { return os << '[' << x.lo() << ", " << x.hi() << ']'; }

Interval operator+(const Interval& a, const Interval& b) { return Interval(a.lo_ + b.lo_, a.hi_ + b.hi_); }
Interval operator-(const Interval& a, const Interval& b) { return Interval(a.lo_ - b.hi_, a.hi_ - b.lo_); }
Interval operator-(const Interval& a) { return Interval(-a.hi_, -a.lo_); }

Interval operator*(const Interval& a, const Interval& b) {
  if (a.degenerate() && b.degenerate()) return Interval(a.lo_ * b.lo_);
  const double p1 = a.lo_ * b.lo_, p2 = a.lo_ * b.hi_, p3 = a.hi_ * b.lo_, p4 = a.hi_ * b.hi_;
  return Interval(std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4}));
}

Interval hull(const Interval& a, const Interval& b) {
  return Interval(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

Interval sqr(const Interval& x) {
  const double l2 = x.lo() * x.lo(), h2 = x.hi() * x.hi();
  if (x.lo() >= 0.0) return Interval(l2, h2);
  if (x.hi() <= 0.0) return Interval(h2, l2);
  return Interval(0.0, std::max(l2, h2));
}

Interval pow(const Interval& x, double p) {
  if (p == 0.0) return Interval(1.0);
  if (p == 1.0) return x;
  if (p == 2.0) return sqr(x);
  if (is_integer(p)) {
    const auto k = static_cast<long long>(p);
    if (k > 0) {
      const double a = std::pow(x.lo(), p), b = std::pow(x.hi(), p);
      if (k % 2 == 1) return outward(a, b);
      if (x.lo() >= 0.0) return outward(a, b);
      if (x.hi() <= 0.0) return outward(b, a);
      return Interval(0.0, up(std::max(a, b)));
    }
    if (x.contains(0.0)) throw DomainError("pow: negative exponent on an interval containing 0");
    const double a = std::pow(x.lo(), p), b = std::pow(x.hi(), p);
    if (x.lo() > 0.0) return outward(b, a);  // decreasing on (0, inf)
    // On (-inf, 0): odd negative powers decrease, even ones increase.
    if ((-k) % 2 == 1) return outward(b, a);
    return outward(a, b);
  }
  if (p > 0.0) {
    if (x.lo() < 0.0) throw DomainError("pow: non-integer exponent on an interval reaching below 0");
    return Interval(std::max(0.0, down(std::pow(x.lo(), p))), up(std::pow(x.hi(), p)));
  }
  if (x.lo() <= 0.0) throw DomainError("pow: negative non-integer exponent needs a positive interval");
  return outward(std::pow(x.hi(), p), std::pow(x.lo(), p));
}

Interval log1p(const Interval& x) {
  if (!(x.lo() > -1.0)) {
    std::ostringstream os;
    os << "log1p: interval " << x << " reaches the singularity at -1";
    throw DomainError(os.str());
  }
  return outward(std::log1p(x.lo()), std::log1p(x.hi()));
}

Interval sin(const Interval& x) {
  if (x.width() >= kTwoPi) return Interval(-1.0, 1.0);
  const double a = std::sin(x.lo()), b = std::sin(x.hi());
  double lo = std::max(-1.0, down(std::min(a, b)));
  double hi = std::min(1.0, up(std::max(a, b)));
  if (hits(x.lo(), x.hi(), 0.5 * kPi, kTwoPi)) hi = 1.0;
  if (hits(x.lo(), x.hi(), -0.5 * kPi, kTwoPi)) lo = -1.0;
  return Interval(lo, hi);
}

Interval cos(const Interval& x) {
  if (x.width() >= kTwoPi) return Interval(-1.0, 1.0);
  const double a = std::cos(x.lo()), b = std::cos(x.hi());
  double lo = std::max(-1.0, down(std::min(a, b)));
  double hi = std::min(1.0, up(std::max(a, b)));
  if (hits(x.lo(), x.hi(), 0.0, kTwoPi)) hi = 1.0;
  if (hits(x.lo(), x.hi(), kPi, kTwoPi)) lo = -1.0;
  return Interval(lo, hi);
}

Interval tan(const Interval& x) {
  if (x.width() >= kPi || hits(x.lo(), x.hi(), 0.5 * kPi, kPi)) {
    std::ostringstream os;
    os << "tan: interval " << x << " contains a pole";
    throw DomainError(os.str());
  }
  return outward(std::tan(x.lo()), std::tan(x.hi()));
}

Interval min(const Interval& a, const Interval& b) {
  return Interval(std::min(a.lo(), b.lo()), std::min(a.hi(), b.hi()));
}

Interval max(const Interval& a, const Interval& b) {
  return Interval(std::max(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

IntervalBox::IntervalBox(Vector lower, Vector upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
  require(lower_.size() == upper_.size(), "interval box: bound dimensions differ");
  for (Eigen::Index i = 0; i < lower_.size(); ++i) {
    if (!(lower_(i) <= upper_(i))) {
      std::ostringstream os;
      os << "interval box: lower > upper in coordinate " << i << " (" << lower_(i) << " > " << upper_(i) << ")";
      throw std::invalid_argument(os.str());
    }
  }
}

IntervalBox::IntervalBox(const std::vector<Interval>& components)
    : lower_(static_cast<Eigen::Index>(components.size())), upper_(static_cast<Eigen::Index>(components.size())) {
  for (std::size_t i = 0; i < components.size(); ++i) {
    lower_(static_cast<Eigen::Index>(i)) = components[i].lo();
    upper_(static_cast<Eigen::Index>(i)) = components[i].hi();
  }
}

std::vector<Interval> IntervalBox::components() const {
  std::vector<Interval> out;
  out.reserve(dim());
  for (std::size_t i = 0; i < dim(); ++i) out.push_back((*this)[i]);
  return out;
}

bool IntervalBox::contains(const Vector& x) const {
  require(static_cast<std::size_t>(x.size()) == dim(), "interval box: dimension mismatch");
  return (x.array() >= lower_.array()).all() && (x.array() <= upper_.array()).all();
}

bool IntervalBox::subset_of(const IntervalBox& other) const {
  require(other.dim() == dim(), "interval box: dimension mismatch");
  return (lower_.array() >= other.lower_.array()).all() && (upper_.array() <= other.upper_.array()).all();
}

}  // namespace probreach
