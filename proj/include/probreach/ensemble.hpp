#pragma once

#include <cstdint>
#include <vector>

#include "probreach/core.hpp"

namespace probreach {

/// Sampled stochastic trajectories with their deviations from the associated
/// deterministic trajectories (same x0, same inputs), plus the nominal
/// trajectory x*_t from the centre of the initial set.
struct TrajectoryEnsemble {
  std::size_t n_traj = 0;
  std::size_t horizon = 0;
  std::size_t dim = 0;
  std::uint64_t seed = 0;
  std::vector<Vector> nominal;  // x*_0..x*_T
  /// Row-major [trajectory][t][coordinate]; empty when states were not kept.
  std::vector<double> states;
  /// Times with recorded deviations (sorted), and the deviations
  /// ‖X_t − x_t‖ (in the ensemble norm) laid out [trajectory][slot].
  std::vector<std::size_t> record_times;
  std::vector<double> deviations;

  bool has_states() const noexcept { return !states.empty(); }
  Vector state(std::size_t traj, std::size_t t) const;
  std::size_t slot(std::size_t t) const;
  double deviation(std::size_t traj, std::size_t t) const { return deviations[traj * record_times.size() + slot(t)]; }
  std::vector<double> deviations_at(std::size_t t) const;
};

}  // namespace probreach
