#include "probreach/drs.hpp"

#include <cmath>
#include <sstream>

namespace probreach {

double lipschitz_radius(double l_d, double rho, double r1, double r2, std::size_t t) {
  require(std::isfinite(l_d) && l_d >= 0.0, "L_d must be finite and non-negative");
  require(std::isfinite(rho) && rho >= 0.0, "rho must be finite and non-negative");
  require(r1 >= 0.0 && r2 >= 0.0, "radii must be non-negative");
  const double tt = static_cast<double>(t);
  if (t == 0) return r1;
  const double growth = std::pow(l_d, tt);
  double geometric;
  if (l_d == 1.0) {
    geometric = tt;
  } else if (std::abs(l_d - 1.0) < 1e-6) {
    // expm1 form avoids cancellation near the L_d = 1 limit.
    geometric = std::expm1(tt * std::log(l_d)) / (l_d - 1.0);
  } else {
    geometric = (growth - 1.0) / (l_d - 1.0);
  }
  return growth * r1 + rho * r2 * geometric;
}

BallSet lipschitz_drs(const std::vector<Vector>& nominal, double l_d, double rho, double r1, double r2,
                      std::size_t t, const NormSpec& norm) {
  require(t < nominal.size(), "nominal trajectory does not reach t=" + std::to_string(t));
  return BallSet(nominal[t], lipschitz_radius(l_d, rho, r1, r2, t), norm);
}

std::vector<BallSet> lipschitz_drs_tube(const std::vector<Vector>& nominal, const std::vector<double>& l_d,
                                        const std::vector<double>& rho, double r1, double r2, const NormSpec& norm) {
  require(!nominal.empty(), "nominal trajectory is empty");
  const std::size_t horizon = nominal.size() - 1;
  require(l_d.size() >= horizon && rho.size() >= horizon, "Lipschitz sequences shorter than the horizon");
  require(r1 >= 0.0 && r2 >= 0.0, "radii must be non-negative");
  std::vector<BallSet> tube;
  tube.reserve(horizon + 1);
  double radius = r1;
  tube.emplace_back(nominal[0], radius, norm);
  for (std::size_t t = 0; t < horizon; ++t) {
    require(std::isfinite(l_d[t]) && l_d[t] >= 0.0 && std::isfinite(rho[t]) && rho[t] >= 0.0,
            "Lipschitz constants must be finite and non-negative");
    radius = l_d[t] * radius + rho[t] * r2;
    tube.emplace_back(nominal[t + 1], radius, norm);
  }
  return tube;
}

InclusionFunction natural_inclusion(const SystemModel& model) {
  if (!model.expressions())
    throw std::invalid_argument("system '" + model.name() +
                                "' is not written in the primitive-op vocabulary; no natural inclusion");
  return [dynamics = *model.expressions()](const IntervalBox& x, const IntervalBox& u, std::size_t) {
    const auto xs = x.components();
    const auto us = u.components();
    const auto n = static_cast<Eigen::Index>(dynamics.size());
    Vector lo(n), hi(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Interval v = dynamics[static_cast<std::size_t>(i)].eval(std::span<const Interval>(xs),
                                                                    std::span<const Interval>(us));
      lo(i) = v.lo();
      hi(i) = v.hi();
    }
    return std::make_pair(lo, hi);
  };
}

IntervalBox interval_step(const InclusionFunction& inc, const IntervalBox& box, const IntervalBox& input_box,
                          std::size_t t) {
  auto [lo, hi] = inc(box, input_box, t);
  if (lo.size() != hi.size() || static_cast<std::size_t>(lo.size()) != box.dim())
    throw std::logic_error("inclusion function returned bounds of the wrong dimension");
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    if (!(lo(i) <= hi(i))) {
      std::ostringstream os;
      os << "inclusion function returned inverted bounds in coordinate " << i << " at t=" << t << ": [" << lo(i)
         << ", " << hi(i) << "]";
      throw std::logic_error(os.str());
    }
  }
  return IntervalBox(std::move(lo), std::move(hi));
}

std::vector<IntervalBox> interval_reach(const InclusionFunction& inc, const IntervalBox& x0_box,
                                        const IntervalBox& input_box, std::size_t horizon) {
  std::vector<IntervalBox> boxes;
  boxes.reserve(horizon + 1);
  boxes.push_back(x0_box);
  for (std::size_t t = 0; t < horizon; ++t) {
    try {
      boxes.push_back(interval_step(inc, boxes.back(), input_box, t));
    } catch (const DomainError& e) {
      throw DomainError("interval_reach step " + std::to_string(t) + ": " + e.what());
    }
  }
  return boxes;
}

}  // namespace probreach
