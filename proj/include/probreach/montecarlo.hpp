#pragma once

#include <optional>
#include <vector>

#include "probreach/deviation.hpp"
#include "probreach/drs.hpp"
#include "probreach/ensemble.hpp"
#include "probreach/presets.hpp"
#include "probreach/prs.hpp"

namespace probreach {

struct EnsembleOptions {
  std::size_t n_traj = 1000;
  std::uint64_t seed = 0;
  bool keep_states = true;
  /// Times whose deviations are stored; empty means 0..T.
  std::vector<std::size_t> record_times;
  /// 0 uses the preset horizon.
  std::size_t horizon = 0;
  /// Deviation norm; the preset norm when unset.
  std::optional<NormSpec> norm;
};

/// Samples n_traj stochastic trajectories (x0 uniform in the initial set,
/// inputs per the preset policy) and their deterministic twins. Trajectory i
/// draws from make_stream(seed, i), so the result does not depend on the
/// thread count. Divergence is rethrown with the trajectory index.
TrajectoryEnsemble run_ensemble(const ExperimentPreset& preset, const EnsembleOptions& options);

/// ⌈δN⌉-th largest deviation at time t.
double empirical_quantile_radius(const TrajectoryEnsemble& ensemble, double delta, std::size_t t);

struct LipschitzEstimateOptions {
  double inflation = 1.1;
  std::uint64_t seed = 0x1a9;
  /// Ratio norm; the region's norm (Euclidean for boxes) when unset.
  std::optional<NormSpec> norm;
};

/// Statistical (not certified) estimate of the Lipschitz constant of
/// x ↦ f(x, u, t) over a bounded convex region: the largest sampled ratio
/// ‖f(x,u,t) − f(y,u,t)‖ / ‖x − y‖, times the inflation factor. Half of the
/// pairs are independent uniform draws, the other half are close pairs
/// y = x + 10⁻³ (z − x) that probe local slopes. Inputs are drawn from the
/// model's input set.
double estimate_local_lipschitz(const SystemModel& model, const ReachSet& region, std::size_t n_pairs,
                                std::size_t t, const LipschitzEstimateOptions& options = {});

enum class DrsBackend { lipschitz, interval };

const char* backend_name(DrsBackend backend);

struct TubeOptions {
  DrsBackend backend = DrsBackend::lipschitz;
  /// Overrides for the preset values (when positive).
  double delta = 0.0;
  double epsilon = 0.0;
  std::size_t horizon = 0;
  /// Samples per step when the noise proxy must be certified.
  std::size_t certify_samples = 20000;
  std::uint64_t seed = 0;
};

/// Everything the δ-PRS needs along the nominal trajectory.
struct ReachTube {
  std::size_t horizon = 0;
  double delta = 0.0;
  EpsilonConstants eps;
  DrsBackend backend = DrsBackend::lipschitz;
  std::vector<Vector> nominal;         // x*_0..x*_T
  std::vector<double> sigma2;          // σ_0²..σ_{T-1}²
  std::vector<double> lipschitz;       // L_0..L_{T-1}
  DeviationSchedule schedule;
  std::vector<ReachSet> drs;           // R̄_0..R̄_T
  std::vector<double> r_delta;         // r_{δ,0}..r_{δ,T}
  std::vector<ProbabilisticReachSet> prs;
};

/// Builds the nominal trajectory, the noise proxies (certified along the
/// nominal when no closed form exists, then held at their maximum), the
/// Lipschitz sequence (localized over the DRS inflated by r_{δ,t} when the
/// preset supports it), the DRS over-approximation and the δ-PRS.
ReachTube compute_reach_tube(const ExperimentPreset& preset, const TubeOptions& options = {});

/// Noiseless trajectories from uniform initial states (and inputs per the
/// preset policy); counts how many leave the DRS at some t.
struct DrsSoundness {
  std::size_t trajectories = 0;
  std::size_t violations = 0;
  double worst_margin = 0.0;  // min over trajectories and t of (radius − distance); boxes use −distance
};
DrsSoundness check_drs_soundness(const ExperimentPreset& preset, const ReachTube& tube, std::size_t n_traj,
                                 std::uint64_t seed);

}  // namespace probreach
