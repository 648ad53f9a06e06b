#pragma once

#include <vector>

#include "probreach/core.hpp"

namespace probreach {

/// Scaling sequences of the stochastic deviation over a horizon T:
///   Psi[t]        accumulated proxy, Psi[t+1] = L_t² Psi[t] + σ_t², Psi[0] = 0
///   worst[t]      Σ_k σ_k Π_{j>k} L_j, worst[t+1] = L_t worst[t] + σ_t
///   log_psi[t]    log ψ_t = Σ_{k≤t} log L_k²   (ψ itself overflows for long horizons)
struct DeviationSchedule {
  std::size_t horizon = 0;
  std::vector<double> lipschitz;  // L_0..L_{T-1}
  std::vector<double> sigma2;     // σ_0²..σ_{T-1}²
  std::vector<double> log_psi;    // log ψ_0..log ψ_{T-1}
  std::vector<double> Psi;        // Ψ_0..Ψ_T
  std::vector<double> worst;      // worst-case scale, 0..T

  double psi(std::size_t t) const;
};

struct EpsilonConstants {
  double epsilon = 1.0 / 16.0;
  double eps1 = 0.0;
  double eps2 = 0.0;
};

inline constexpr double kDefaultEpsilon = 1.0 / 16.0;

DeviationSchedule build_schedule(const std::vector<double>& lipschitz, const std::vector<double>& sigma2,
                                 std::size_t horizon);
/// Constant L and σ².
DeviationSchedule constant_schedule(double lipschitz, double sigma2, std::size_t horizon);

/// ε₁ = 2 log(1 + 2/ε)/(1 − ε)², ε₂ = 2/(1 − ε)².
EpsilonConstants epsilon_constants(double epsilon);

/// r = sqrt(Ψ_t (ε₁ n + ε₂ log(1/δ))).
double amgf_bound(const DeviationSchedule& schedule, std::size_t n, double delta, const EpsilonConstants& eps,
                  std::size_t t);
/// r = sqrt(n Ψ_t / δ), from the second-moment bound and Markov's inequality.
double markov_bound(const DeviationSchedule& schedule, std::size_t n, double delta, std::size_t t);
/// Union-bound radius: worst[t] · sqrt(ε₁ n + ε₂ log(t/δ)); 0 at t = 0.
double worstcase_bound(const DeviationSchedule& schedule, std::size_t n, double delta, const EpsilonConstants& eps,
                       std::size_t t);
/// amgf_bound on the constant-L schedule with L = ‖A‖.
double linear_exact_bound(double a_norm, const std::vector<double>& sigma2, std::size_t n, double delta,
                          const EpsilonConstants& eps, std::size_t t);

/// n Ψ_t, the bound on E‖X_t − x_t‖².
double expectation_bound(const DeviationSchedule& schedule, std::size_t n, std::size_t t);

struct EpsilonChoice {
  EpsilonConstants constants;
  double radius = 0.0;
};

/// Grid search of ε over (0.005, 0.995) followed by a golden-section polish
/// around the best grid point.
EpsilonChoice optimize_epsilon(const DeviationSchedule& schedule, std::size_t n, double delta, std::size_t t,
                               std::size_t grid_size = 64);

}  // namespace probreach
