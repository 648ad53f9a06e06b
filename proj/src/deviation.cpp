#include "probreach/deviation.hpp"

#include <cmath>
#include <string>

namespace probreach {
namespace {

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
}

void check_time(const DeviationSchedule& s, std::size_t t) {
  if (t > s.horizon)
    throw std::out_of_range("t=" + std::to_string(t) + " exceeds the schedule horizon " + std::to_string(s.horizon));
}

}  // namespace

double DeviationSchedule::psi(std::size_t t) const { return std::exp(log_psi.at(t)); }

DeviationSchedule build_schedule(const std::vector<double>& lipschitz, const std::vector<double>& sigma2,
                                 std::size_t horizon) {
  require(lipschitz.size() >= horizon, "Lipschitz sequence shorter than the horizon");
  require(sigma2.size() >= horizon, "variance-proxy sequence shorter than the horizon");
  DeviationSchedule s;
  s.horizon = horizon;
  s.lipschitz.assign(lipschitz.begin(), lipschitz.begin() + static_cast<std::ptrdiff_t>(horizon));
  s.sigma2.assign(sigma2.begin(), sigma2.begin() + static_cast<std::ptrdiff_t>(horizon));
  s.Psi.assign(horizon + 1, 0.0);
  s.worst.assign(horizon + 1, 0.0);
  s.log_psi.resize(horizon);
  double log_psi = 0.0;
  for (std::size_t t = 0; t < horizon; ++t) {
    const double l = s.lipschitz[t], v = s.sigma2[t];
    if (!std::isfinite(l) || l < 0.0)
      throw std::invalid_argument("L_" + std::to_string(t) + " must be finite and non-negative");
    if (!std::isfinite(v) || v < 0.0)
      throw std::invalid_argument("sigma2_" + std::to_string(t) + " must be finite and non-negative");
    s.Psi[t + 1] = l * l * s.Psi[t] + v;
    s.worst[t + 1] = l * s.worst[t] + std::sqrt(v);
    log_psi += 2.0 * std::log(l);
    s.log_psi[t] = log_psi;
  }
  return s;
}

DeviationSchedule constant_schedule(double lipschitz, double sigma2, std::size_t horizon) {
  return build_schedule(std::vector<double>(horizon, lipschitz), std::vector<double>(horizon, sigma2), horizon);
}

EpsilonConstants epsilon_constants(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  const double shrink = (1.0 - epsilon) * (1.0 - epsilon);
  return {epsilon, 2.0 * std::log1p(2.0 / epsilon) / shrink, 2.0 / shrink};
}

double amgf_bound(const DeviationSchedule& schedule, std::size_t n, double delta, const EpsilonConstants& eps,
                  std::size_t t) {
  check_delta(delta);
  check_time(schedule, t);
  const double budget = eps.eps1 * static_cast<double>(n) + eps.eps2 * std::log(1.0 / delta);
  return std::sqrt(schedule.Psi[t]) * std::sqrt(budget);
}

double markov_bound(const DeviationSchedule& schedule, std::size_t n, double delta, std::size_t t) {
  check_delta(delta);
  check_time(schedule, t);
  return std::sqrt(static_cast<double>(n) * schedule.Psi[t] / delta);
}

double worstcase_bound(const DeviationSchedule& schedule, std::size_t n, double delta, const EpsilonConstants& eps,
                       std::size_t t) {
  check_delta(delta);
  check_time(schedule, t);
  if (t == 0) return 0.0;
  const double budget = eps.eps1 * static_cast<double>(n) + eps.eps2 * std::log(static_cast<double>(t) / delta);
  return schedule.worst[t] * std::sqrt(budget);
}

double linear_exact_bound(double a_norm, const std::vector<double>& sigma2, std::size_t n, double delta,
                          const EpsilonConstants& eps, std::size_t t) {
  require(sigma2.size() >= t, "variance-proxy sequence shorter than t");
  const auto schedule = build_schedule(std::vector<double>(t, a_norm), sigma2, t);
  return amgf_bound(schedule, n, delta, eps, t);
}

double expectation_bound(const DeviationSchedule& schedule, std::size_t n, std::size_t t) {
  check_time(schedule, t);
  return static_cast<double>(n) * schedule.Psi[t];
}

EpsilonChoice optimize_epsilon(const DeviationSchedule& schedule, std::size_t n, double delta, std::size_t t,
                               std::size_t grid_size) {
  require(grid_size >= 16, "optimize_epsilon needs grid_size >= 16");
  check_delta(delta);
  constexpr double lo = 0.005, hi = 0.995;
  auto radius = [&](double e) { return amgf_bound(schedule, n, delta, epsilon_constants(e), t); };
  auto budget = [&](double e) {
    const auto c = epsilon_constants(e);
    return c.eps1 * static_cast<double>(n) + c.eps2 * std::log(1.0 / delta);
  };
  const double step = (hi - lo) / static_cast<double>(grid_size - 1);
  std::size_t best = 0;
  double best_budget = budget(lo);
  for (std::size_t k = 1; k < grid_size; ++k) {
    const double b = budget(lo + step * static_cast<double>(k));
    if (b < best_budget) {
      best_budget = b;
      best = k;
    }
  }
  // The budget is unimodal in ε; polish inside the bracketing grid cell.
  double a = lo + step * static_cast<double>(best == 0 ? 0 : best - 1);
  double b = lo + step * static_cast<double>(std::min(best + 1, grid_size - 1));
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  for (int it = 0; it < 80; ++it) {
    if (budget(c) < budget(d)) {
      b = d;
    } else {
      a = c;
    }
    c = b - inv_phi * (b - a);
    d = a + inv_phi * (b - a);
  }
  double eps = 0.5 * (a + b);
  const double grid_eps = lo + step * static_cast<double>(best);
  if (budget(grid_eps) < budget(eps)) eps = grid_eps;
  return {epsilon_constants(eps), radius(eps)};
}

}  // namespace probreach
