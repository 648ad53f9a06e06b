#pragma once

#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "probreach/core.hpp"
#include "probreach/deviation.hpp"

namespace probreach {

enum class AmgfMethod { automatic, closed_form, bessel_series, quadrature };

/// Sphere-averaged MGF Φ_{n,λ}(x) = E_{ℓ∼S^{n−1}} e^{λ⟨ℓ,x⟩}, a function of
/// r = ‖x‖ only:
///   n = 1   cosh(λr)
///   n = 3   sinh(λr)/(λr)
///   any n   Σ_k (λ²r²/4)^k / (k! (n/2)_k)    ((·)_k rising factorial)
/// The series is used up to λr = 30 and falls back to quadrature beyond that
/// or when it fails to converge within the iteration cap.
class AmgfEvaluator {
 public:
  explicit AmgfEvaluator(std::size_t n, AmgfMethod method = AmgfMethod::automatic, double tolerance = 1e-15);

  std::size_t dim() const noexcept { return n_; }
  AmgfMethod method() const noexcept { return method_; }
  double tolerance() const noexcept { return tolerance_; }

  double operator()(double lambda, double r) const;
  double operator()(double lambda, const Vector& x) const { return (*this)(lambda, x.norm()); }

 private:
  std::size_t n_;
  AmgfMethod method_;
  double tolerance_;
};

inline constexpr double kSeriesLimit = 30.0;
inline constexpr int kSeriesMaxTerms = 2000;

double amgf(std::size_t n, double lambda, double r);

/// Independent reference: ∫₀^π e^{λr cosθ} sin^{n−2}θ dθ / ∫₀^π sin^{n−2}θ dθ
/// by fixed-order Gauss–Legendre quadrature.
double amgf_quadrature_oracle(std::size_t n, double lambda, double r, std::size_t nodes = 512);

/// Gauss–Legendre nodes and weights on [-1, 1].
void gauss_legendre(std::size_t order, std::vector<double>& nodes, std::vector<double>& weights);

enum class TestNoise { gaussian, uniform };

struct DecouplingReport {
  double lhs = 0.0;         // Monte Carlo E_w Φ(x + w)
  double lhs_stderr = 0.0;  // standard error of the estimate
  double rhs = 0.0;         // e^{λ²σ²/2} Φ(x)
  std::size_t samples = 0;
  bool pass = false;
};

/// Monte Carlo check of E_w Φ_{n,λ}(x + w) ≤ e^{λ²σ²/2} Φ_{n,λ}(x) for
/// w ~ N(0, σ² I) or w ~ U[−σ, σ]ⁿ (both subG(σ²)); pass iff the estimate
/// stays below the right side plus three standard errors.
DecouplingReport verify_decoupling(std::size_t n, double lambda, double sigma, const Vector& x,
                                   std::size_t n_samples, TestNoise noise = TestNoise::gaussian,
                                   std::uint64_t seed = 1);

struct ConcentrationReport {
  double radius = 0.0;  // sqrt(σ²(ε₁n + ε₂ log(1/δ)))
  std::size_t violations = 0;
  std::size_t samples = 0;
  double rate = 0.0;
  double threshold = 0.0;  // δ + 3 sqrt(δ / N)
  bool pass = false;
};

/// Empirical frequency of ‖X‖ exceeding the norm-concentration radius for an
/// isotropic subG(σ²) vector.
ConcentrationReport verify_norm_concentration(std::size_t n, double sigma, double delta, double epsilon,
                                              std::size_t n_samples, TestNoise noise = TestNoise::gaussian,
                                              std::uint64_t seed = 2);

struct AmgfSuiteOptions {
  std::size_t mc_samples = 100000;
  std::uint64_t seed = 11;
  double series_tolerance = 1e-7;
  double closed_form_tolerance = 1e-9;
};

struct AmgfSuiteResult {
  bool pass = false;
  double series_vs_quadrature = 0.0;  // worst relative error
  double closed_form = 0.0;           // worst relative error
  std::size_t decoupling_failures = 0;
  std::size_t concentration_failures = 0;
  nlohmann::json report;
};

/// Series against the quadrature oracle (2 ≤ n ≤ 10, λr ≤ 30), closed forms
/// for n = 1 and n = 3, and the decoupling and norm-concentration Monte Carlo
/// checks for Gaussian and uniform noise.
AmgfSuiteResult amgf_lemma_suite(const AmgfSuiteOptions& options = {});

}  // namespace probreach
