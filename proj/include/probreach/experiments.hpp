#pragma once

#include <string>
#include <vector>

#include "probreach/amgf.hpp"
#include "probreach/montecarlo.hpp"
#include "probreach/report.hpp"

namespace probreach {

struct RunOptions {
  std::uint64_t seed = 0;
  /// Overrides of the preset values; 0 keeps the preset's.
  double delta = 0.0;
  double epsilon = 0.0;
  std::size_t horizon = 0;
  std::size_t samples = 0;
  DrsBackend backend = DrsBackend::lipschitz;
  /// Scaling-law study: trajectories per ensemble (0: 10⁵, or 10⁷ with `full`).
  std::size_t scaling_samples = 0;
  /// Paper-scale scaling study (10⁷ samples, δ down to 10⁻⁴).
  bool full = false;
};

/// Columns t,Psi,r_amgf,r_markov,r_worstcase.
Table bounds_table(const ReachTube& tube, std::size_t n);

/// bounds.csv for the preset's deviation schedule.
ReportBundle bound_report(const ExperimentPreset& preset, const RunOptions& options);
/// drs.csv with centre/radius (Lipschitz) or lower/upper (interval) per t.
ReportBundle drs_report(const ExperimentPreset& preset, const RunOptions& options);
/// prs.csv, coverage.csv and prs_geometry.json (boundary point clouds).
ReportBundle prs_report(const ExperimentPreset& preset, const RunOptions& options);
/// deviations.csv (per-t summary) and trajectories.csv (first trajectories).
ReportBundle simulate_report(const ExperimentPreset& preset, const RunOptions& options);
/// amgf_check.json.
ReportBundle amgf_report(const RunOptions& options);

/// Figure data for the linear, cobweb and uav studies, plus their checks.
ReportBundle reproduce_experiment(const std::string& name, const RunOptions& options);

/// Points on the boundary of the projection of a δ-PRS onto the coordinates
/// `dims` (2 or 3 of them), from support points in evenly spread directions.
std::vector<Vector> boundary_cloud(const ProbabilisticReachSet& prs, const std::vector<std::size_t>& dims,
                                   std::size_t count);

/// Coefficient of determination of the least-squares line y ≈ a + b x.
double r_squared(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace probreach
