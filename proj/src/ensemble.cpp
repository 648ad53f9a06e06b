#include "probreach/ensemble.hpp"

#include <algorithm>
#include <string>

namespace probreach {

Vector TrajectoryEnsemble::state(std::size_t traj, std::size_t t) const {
  if (!has_states()) throw std::logic_error("ensemble was simulated without keeping states");
  if (traj >= n_traj || t > horizon) throw std::out_of_range("ensemble state index out of range");
  const auto offset = static_cast<std::ptrdiff_t>((traj * (horizon + 1) + t) * dim);
  return Eigen::Map<const Vector>(states.data() + offset, static_cast<Eigen::Index>(dim));
}

std::size_t TrajectoryEnsemble::slot(std::size_t t) const {
  const auto it = std::lower_bound(record_times.begin(), record_times.end(), t);
  if (it == record_times.end() || *it != t)
    throw std::out_of_range("deviations were not recorded at t=" + std::to_string(t));
  return static_cast<std::size_t>(it - record_times.begin());
}

std::vector<double> TrajectoryEnsemble::deviations_at(std::size_t t) const {
  const std::size_t s = slot(t);
  std::vector<double> out(n_traj);
  for (std::size_t i = 0; i < n_traj; ++i) out[i] = deviations[i * record_times.size() + s];
  return out;
}

}  // namespace probreach
