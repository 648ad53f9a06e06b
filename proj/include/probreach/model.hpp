#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "probreach/expr.hpp"
#include "probreach/sets.hpp"

namespace probreach {

using StepFn = std::function<Vector(const Vector& x, const Vector& u, std::size_t t)>;
using LipschitzFn = std::function<double(std::size_t t)>;

/// Discrete-time dynamics x_{t+1} = f(x_t, u_t, t) with per-step Lipschitz
/// constants L_t (in the active norm) and an admissible input set.
class SystemModel {
 public:
  SystemModel(std::string name, std::size_t dim_state, std::size_t dim_input, StepFn step, LipschitzFn lipschitz,
              ReachSet input_set);

  /// Dynamics written in the primitive-op vocabulary; these models also get a
  /// natural inclusion function.
  static SystemModel from_expressions(std::string name, std::vector<Expr> dynamics, std::size_t dim_input,
                                      LipschitzFn lipschitz, ReachSet input_set);

  const std::string& name() const noexcept { return name_; }
  std::size_t dim_state() const noexcept { return dim_state_; }
  std::size_t dim_input() const noexcept { return dim_input_; }
  const ReachSet& input_set() const noexcept { return input_set_; }
  Vector nominal_input() const { return set_center(input_set_); }
  const std::optional<std::vector<Expr>>& expressions() const noexcept { return expressions_; }

  Vector step(const Vector& x, const Vector& u, std::size_t t) const;
  /// step() into a caller-owned buffer; no dimension checks.
  void step_into(const Vector& x, const Vector& u, std::size_t t, Vector& out) const;
  /// L_t; throws if the supplied constant is negative or non-finite.
  double lipschitz(std::size_t t) const;

  SystemModel with_lipschitz(LipschitzFn lipschitz) const;
  SystemModel with_lipschitz(std::vector<double> per_step) const;

 private:
  std::string name_;
  std::size_t dim_state_;
  std::size_t dim_input_;
  StepFn step_;
  LipschitzFn lipschitz_;
  ReachSet input_set_;
  std::optional<std::vector<Expr>> expressions_;
  std::shared_ptr<const std::vector<CompiledExpr>> tapes_;
};

enum class NoiseKind { gaussian, truncated_gaussian, uniform_box, custom_sampler };

const char* noise_kind_name(NoiseKind kind);

/// `candidate` is the pre-noise value f(x_t, u_t, t).
using NoiseSampler = std::function<Vector(std::size_t t, const Vector& candidate, Rng& rng)>;
/// Per-coordinate truncation caps for truncated Gaussian noise.
using TruncationCap = std::function<Vector(std::size_t t, const Vector& candidate)>;
using ProxyFn = std::function<double(std::size_t t)>;

/// Sub-Gaussian noise w_t = M · g_t where g_t has independent coordinates:
///  - gaussian:            g_i ~ N(0, s_i²)
///  - truncated_gaussian:  g_i = min_|·|{N(0, s_i²), cap_i}  (the value of smaller magnitude)
///  - uniform_box:         g_i ~ U[-s_i, s_i]
/// `custom_sampler` wraps an arbitrary sampler with a user-certified proxy.
class NoiseSpec {
 public:
  static NoiseSpec gaussian(Vector scales, std::optional<Matrix> mixing = std::nullopt);
  static NoiseSpec isotropic_gaussian(std::size_t dim, double sd) { return gaussian(Vector::Constant(dim, sd)); }
  static NoiseSpec truncated_gaussian(Vector scales, TruncationCap cap, std::optional<Matrix> mixing = std::nullopt);
  static NoiseSpec uniform_box(Vector half_widths, std::optional<Matrix> mixing = std::nullopt);
  static NoiseSpec custom(std::size_t dim, NoiseSampler sampler, ProxyFn sigma2 = nullptr);
  static NoiseSpec zero(std::size_t dim) { return gaussian(Vector::Zero(dim)); }

  NoiseKind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return dim_; }
  const Vector& scales() const noexcept { return scales_; }
  const Matrix& mixing() const noexcept { return mixing_; }

  Vector sample(std::size_t t, const Vector& candidate, Rng& rng) const;
  /// sample() into caller-owned buffers (same draws, no allocation once sized).
  void sample_into(std::size_t t, const Vector& candidate, Rng& rng, Vector& out, Vector& scratch) const;

  /// True when σ has a closed form (gaussian, uniform_box).
  bool has_closed_form() const noexcept { return kind_ == NoiseKind::gaussian || kind_ == NoiseKind::uniform_box; }
  /// Closed-form proxy σ in the frame of `norm`: ‖P^{1/2} M diag(s)‖₂.
  double closed_form_sigma(const NormSpec& norm) const;
  /// Certified σ_t² in the frame of `norm`: closed form when available,
  /// otherwise the value attached with with_variance_proxy().
  double variance_proxy(std::size_t t, const NormSpec& norm) const;
  bool has_variance_proxy() const noexcept { return static_cast<bool>(proxy_); }
  NoiseSpec with_variance_proxy(ProxyFn sigma2) const;

 private:
  NoiseSpec(NoiseKind kind, std::size_t dim) : kind_(kind), dim_(dim) {}

  NoiseKind kind_;
  std::size_t dim_;
  Vector scales_;
  Matrix mixing_;
  bool identity_mixing_ = true;
  TruncationCap cap_;
  NoiseSampler sampler_;
  ProxyFn proxy_;
};

struct CertifyOptions {
  std::size_t t = 0;
  /// Pre-noise candidate passed to state-dependent samplers (zeros if empty).
  Vector candidate;
  std::uint64_t seed = 0x5eed;
  std::size_t n_directions = 32;
  double safety_factor = 1.05;
  /// Implied σ² above this multiple of the directional variance means the
  /// samples do not look sub-Gaussian.
  double divergence_ratio = 1.5;
};

/// λ grid used by default: ±{0.25, 0.5, ..., 10}.
std::vector<double> default_lambda_grid();

/// Smallest σ (times the safety factor) such that the empirical MGF of the
/// noise, expressed in the frame of `norm`, satisfies E e^{λ⟨ℓ,w⟩} ≤ e^{λ²σ²/2}
/// over the λ grid and a fixed set of unit directions ℓ. λ is measured in
/// units of the inverse empirical scale. Gaussian and uniform-box noise use
/// their closed forms without sampling.
double certify_variance_proxy(const NoiseSpec& noise, const NormSpec& norm, std::size_t n_samples,
                              const std::vector<double>& lambda_grid, const CertifyOptions& options = {});

struct TrajectoryPair {
  std::vector<Vector> stochastic;
  std::vector<Vector> deterministic;
  double deviation(std::size_t t, const NormSpec& norm) const { return norm(stochastic[t] - deterministic[t]); }
};

/// Simulates X_{t+1} = f(X_t,u_t,t) + w_t and its associated noiseless
/// trajectory from the same x0 under the same inputs.
TrajectoryPair simulate_pair(const SystemModel& model, const NoiseSpec& noise, const Vector& x0,
                             const std::vector<Vector>& inputs, std::size_t horizon, Rng& rng);
TrajectoryPair simulate_pair(const SystemModel& model, const NoiseSpec& noise, const Vector& x0,
                             const std::vector<Vector>& inputs, std::size_t horizon, std::uint64_t seed);

}  // namespace probreach
