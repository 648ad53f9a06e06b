#include "probreach/prs.hpp"

#include <cmath>
#include <limits>

namespace probreach {

ProbabilisticReachSet make_prs(ReachSet base, const DeviationSchedule& schedule, std::size_t n, double delta,
                               const EpsilonConstants& eps, std::size_t t) {
  const double r = amgf_bound(schedule, n, delta, eps, t);
  return {std::move(base), r, delta, t};
}

double distance_to(const ReachSet& base, const Vector& x) {
  require(static_cast<std::size_t>(x.size()) == set_dim(base), "membership: dimension mismatch");
  if (const auto* box = std::get_if<IntervalBox>(&base)) {
    const Vector clamped = x.cwiseMax(box->lower()).cwiseMin(box->upper());
    return (x - clamped).norm();
  }
  const auto& ball = std::get<BallSet>(base);
  return std::max(0.0, ball.norm()(x - ball.center()) - ball.radius());
}

Membership membership(const ProbabilisticReachSet& prs, const Vector& x) {
  Membership m;
  m.distance = distance_to(prs.base, x);
  m.margin = prs.inflation - m.distance;
  m.inside = m.distance <= prs.inflation;
  return m;
}

std::vector<CoverageRow> coverage_check(const std::vector<ProbabilisticReachSet>& prs,
                                        const TrajectoryEnsemble& ensemble) {
  require(ensemble.has_states(), "coverage_check needs an ensemble that kept its states");
  require(ensemble.n_traj > 0, "coverage_check needs a non-empty ensemble");
  std::vector<CoverageRow> rows;
  rows.reserve(prs.size());
  for (const auto& set : prs) {
    require(set.t <= ensemble.horizon, "PRS time beyond the ensemble horizon");
    CoverageRow row;
    row.t = set.t;
    row.total = ensemble.n_traj;
    row.worst_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ensemble.n_traj; ++i) {
      const Membership m = membership(set, ensemble.state(i, set.t));
      if (m.inside) ++row.inside;
      row.worst_margin = std::min(row.worst_margin, m.margin);
    }
    const double n = static_cast<double>(row.total);
    row.coverage = static_cast<double>(row.inside) / n;
    row.threshold = 1.0 - set.delta - 3.0 * std::sqrt(set.delta / n);
    row.pass = row.coverage >= row.threshold;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace probreach
