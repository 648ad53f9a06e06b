#pragma once

#include <vector>

#include "probreach/deviation.hpp"
#include "probreach/ensemble.hpp"
#include "probreach/sets.hpp"

namespace probreach {

/// δ-PRS R̄_t ⊕ B(r_{δ,t}). The Minkowski sum is never built; membership is
/// decided by the distance from x to the base set. For a ball base the
/// inflation is measured in the ball's own coordinate frame (z = P^{1/2}x),
/// so a weighted ball and the deviation ball share one Euclidean frame.
struct ProbabilisticReachSet {
  ReachSet base;
  double inflation = 0.0;
  double delta = 0.0;
  std::size_t t = 0;
};

ProbabilisticReachSet make_prs(ReachSet base, const DeviationSchedule& schedule, std::size_t n, double delta,
                               const EpsilonConstants& eps, std::size_t t);

struct Membership {
  bool inside = false;
  double distance = 0.0;
  double margin = 0.0;  // inflation − distance
};

/// Distance from x to the base set in the inflation frame.
double distance_to(const ReachSet& base, const Vector& x);

Membership membership(const ProbabilisticReachSet& prs, const Vector& x);

struct CoverageRow {
  std::size_t t = 0;
  std::size_t inside = 0;
  std::size_t total = 0;
  double coverage = 0.0;
  double threshold = 0.0;  // 1 − δ − 3 sqrt(δ/N)
  double worst_margin = 0.0;
  bool pass = false;
};

/// Fraction of ensemble states inside prs_t for every PRS in the sequence
/// (the ensemble must keep states).
std::vector<CoverageRow> coverage_check(const std::vector<ProbabilisticReachSet>& prs,
                                        const TrajectoryEnsemble& ensemble);

}  // namespace probreach
