#include "probreach/amgf.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>

#include "probreach/parallel.hpp"
#include "probreach/rng.hpp"

namespace probreach {
namespace {

std::optional<double> series(std::size_t n, double x, double tolerance) {
  const double q = 0.25 * x * x;
  const double half_n = 0.5 * static_cast<double>(n);
  double term = 1.0, sum = 1.0;
  for (int k = 0; k < kSeriesMaxTerms; ++k) {
    term *= q / ((k + 1.0) * (half_n + k));
    sum += term;
    // Terms decrease monotonically once k exceeds ~x/2.
    if (term <= tolerance * sum && static_cast<double>(k) > 0.5 * x) return sum;
  }
  return std::nullopt;
}

double closed_form(std::size_t n, double x) {
  if (n == 1) return std::cosh(x);
  if (x < 1e-4) return 1.0 + x * x / 6.0 + x * x * x * x / 120.0;
  return std::sinh(x) / x;
}

constexpr std::size_t kBlock = 4096;

}  // namespace

AmgfEvaluator::AmgfEvaluator(std::size_t n, AmgfMethod method, double tolerance)
    : n_(n), method_(method), tolerance_(tolerance) {
  require(n >= 1, "AMGF dimension must be at least 1");
  require(tolerance > 0.0 && tolerance < 1e-3, "AMGF tolerance must lie in (0, 1e-3)");
  if (method == AmgfMethod::closed_form) require(n == 1 || n == 3, "closed form exists only for n = 1 and n = 3");
  if (method == AmgfMethod::quadrature) require(n >= 2, "quadrature needs n >= 2");
}

double AmgfEvaluator::operator()(double lambda, double r) const {
  require(std::isfinite(r) && r >= 0.0, "AMGF radius must be finite and non-negative");
  require(std::isfinite(lambda), "AMGF lambda must be finite");
  const double x = std::abs(lambda) * r;
  if (x == 0.0) return 1.0;
  switch (method_) {
    case AmgfMethod::closed_form:
      return closed_form(n_, x);
    case AmgfMethod::quadrature:
      return amgf_quadrature_oracle(n_, 1.0, x);
    case AmgfMethod::bessel_series:
      if (auto s = series(n_, x, tolerance_)) return *s;
      if (n_ == 1) return closed_form(1, x);
      return amgf_quadrature_oracle(n_, 1.0, x);
    case AmgfMethod::automatic:
      if (n_ == 1 || n_ == 3) return closed_form(n_, x);
      if (x <= kSeriesLimit)
        if (auto s = series(n_, x, tolerance_)) return *s;
      return amgf_quadrature_oracle(n_, 1.0, x);
  }
  return 1.0;
}

double amgf(std::size_t n, double lambda, double r) { return AmgfEvaluator(n)(lambda, r); }

void gauss_legendre(std::size_t order, std::vector<double>& nodes, std::vector<double>& weights) {
  require(order >= 1, "quadrature order must be positive");
  nodes.assign(order, 0.0);
  weights.assign(order, 0.0);
  const double n = static_cast<double>(order);
  for (std::size_t i = 0; i < (order + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (std::size_t k = 2; k <= order; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * z * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    nodes[i] = -z;
    nodes[order - 1 - i] = z;
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    weights[i] = w;
    weights[order - 1 - i] = w;
  }
}

namespace {

using Rule = std::pair<std::vector<double>, std::vector<double>>;

const Rule& cached_rule(std::size_t order) {
  static std::mutex mu;
  static std::map<std::size_t, std::unique_ptr<Rule>> rules;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = rules[order];
  if (!slot) {
    slot = std::make_unique<Rule>();
    gauss_legendre(order, slot->first, slot->second);
  }
  return *slot;
}

}  // namespace

double amgf_quadrature_oracle(std::size_t n, double lambda, double r, std::size_t nodes) {
  require(n >= 2, "quadrature oracle needs n >= 2");
  require(nodes >= 64, "quadrature oracle needs at least 64 nodes");
  require(std::isfinite(r) && r >= 0.0, "AMGF radius must be finite and non-negative");
  const double x = std::abs(lambda) * r;
  if (x == 0.0) return 1.0;
  const auto& [z, w] = cached_rule(nodes);
  const double half_pi = 0.5 * std::numbers::pi;
  const double power = static_cast<double>(n) - 2.0;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < nodes; ++i) {
    const double theta = half_pi * (z[i] + 1.0);
    const double weight = w[i] * (power == 0.0 ? 1.0 : std::pow(std::sin(theta), power));
    // e^{x(cosθ − 1)} keeps the integrand bounded; e^{x} is restored below.
    num += weight * std::exp(x * (std::cos(theta) - 1.0));
    den += weight;
  }
  return std::exp(x) * (num / den);
}

DecouplingReport verify_decoupling(std::size_t n, double lambda, double sigma, const Vector& x,
                                   std::size_t n_samples, TestNoise noise, std::uint64_t seed) {
  require(static_cast<std::size_t>(x.size()) == n, "x must have dimension n");
  require(sigma >= 0.0 && std::isfinite(sigma), "sigma must be finite and non-negative");
  require(n_samples >= 2, "need at least two samples");
  const AmgfEvaluator phi(n);
  const std::size_t blocks = (n_samples + kBlock - 1) / kBlock;
  std::vector<double> sums(blocks, 0.0), squares(blocks, 0.0);
  parallel_for(blocks, [&](std::size_t b) {
    Rng rng = make_stream(seed, b);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    Vector w(static_cast<Eigen::Index>(n));
    const std::size_t end = std::min(n_samples, (b + 1) * kBlock);
    for (std::size_t k = b * kBlock; k < end; ++k) {
      for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = sigma * (noise == TestNoise::gaussian ? normal(rng) : unit(rng));
      const double v = phi(lambda, (x + w).norm());
      sums[b] += v;
      squares[b] += v * v;
    }
  });
  double sum = 0.0, sq = 0.0;
  for (std::size_t b = 0; b < blocks; ++b) {
    sum += sums[b];
    sq += squares[b];
  }
  const double nn = static_cast<double>(n_samples);
  DecouplingReport rep;
  rep.samples = n_samples;
  rep.lhs = sum / nn;
  const double var = std::max(0.0, (sq - nn * rep.lhs * rep.lhs) / (nn - 1.0));
  rep.lhs_stderr = std::sqrt(var / nn);
  rep.rhs = std::exp(0.5 * lambda * lambda * sigma * sigma) * phi(lambda, x.norm());
  rep.pass = rep.lhs <= rep.rhs + 3.0 * rep.lhs_stderr;
  return rep;
}

ConcentrationReport verify_norm_concentration(std::size_t n, double sigma, double delta, double epsilon,
                                              std::size_t n_samples, TestNoise noise, std::uint64_t seed) {
  require(n >= 1, "dimension must be positive");
  require(sigma >= 0.0 && std::isfinite(sigma), "sigma must be finite and non-negative");
  require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
  require(n_samples >= 1, "need at least one sample");
  const auto eps = epsilon_constants(epsilon);
  ConcentrationReport rep;
  rep.samples = n_samples;
  rep.radius = std::sqrt(sigma * sigma * (eps.eps1 * static_cast<double>(n) + eps.eps2 * std::log(1.0 / delta)));
  const std::size_t blocks = (n_samples + kBlock - 1) / kBlock;
  std::vector<std::size_t> counts(blocks, 0);
  parallel_for(blocks, [&](std::size_t b) {
    Rng rng = make_stream(seed, b);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const std::size_t end = std::min(n_samples, (b + 1) * kBlock);
    for (std::size_t k = b * kBlock; k < end; ++k) {
      double sq = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double v = sigma * (noise == TestNoise::gaussian ? normal(rng) : unit(rng));
        sq += v * v;
      }
      if (std::sqrt(sq) > rep.radius) ++counts[b];
    }
  });
  for (auto c : counts) rep.violations += c;
  rep.rate = static_cast<double>(rep.violations) / static_cast<double>(n_samples);
  rep.threshold = delta + 3.0 * std::sqrt(delta / static_cast<double>(n_samples));
  rep.pass = rep.rate <= rep.threshold;
  return rep;
}

}  // namespace probreach

namespace probreach {

AmgfSuiteResult amgf_lemma_suite(const AmgfSuiteOptions& options) {
  using nlohmann::json;
  AmgfSuiteResult res;
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
  const std::vector<double> lr_grid{0.0, 1e-3, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0};

  json series = json::array();
  for (std::size_t n = 2; n <= 10; ++n) {
    const AmgfEvaluator ev(n, AmgfMethod::bessel_series);
    double worst = 0.0;
    for (double lr : lr_grid) worst = std::max(worst, rel(ev(1.0, lr), amgf_quadrature_oracle(n, 1.0, lr)));
    res.series_vs_quadrature = std::max(res.series_vs_quadrature, worst);
    series.push_back({{"n", n}, {"max_rel_error", worst}, {"pass", worst <= options.series_tolerance}});
  }

  json closed = json::array();
  for (std::size_t n : {std::size_t{1}, std::size_t{3}}) {
    const AmgfEvaluator ser(n, AmgfMethod::bessel_series);
    double worst = 0.0;
    for (double lr : lr_grid) {
      const double exact = n == 1 ? std::cosh(lr) : (lr == 0.0 ? 1.0 : std::sinh(lr) / lr);
      worst = std::max({worst, rel(ser(1.0, lr), exact), rel(amgf(n, 1.0, lr), exact)});
    }
    res.closed_form = std::max(res.closed_form, worst);
    closed.push_back({{"n", n}, {"max_rel_error", worst}, {"pass", worst <= options.closed_form_tolerance}});
  }

  json decoupling = json::array();
  std::uint64_t seed = options.seed;
  for (TestNoise noise : {TestNoise::gaussian, TestNoise::uniform}) {
    for (std::size_t n : {std::size_t{2}, std::size_t{5}, std::size_t{10}}) {
      for (double lambda : {0.5, 1.5}) {
        Vector x = Vector::LinSpaced(static_cast<Eigen::Index>(n), 0.2, 1.0);
        const auto r = verify_decoupling(n, lambda, 0.7, x, options.mc_samples, noise, ++seed);
        res.decoupling_failures += r.pass ? 0 : 1;
        decoupling.push_back({{"noise", noise == TestNoise::gaussian ? "gaussian" : "uniform"},
                              {"n", n},
                              {"lambda", lambda},
                              {"sigma", 0.7},
                              {"lhs", r.lhs},
                              {"lhs_stderr", r.lhs_stderr},
                              {"rhs", r.rhs},
                              {"pass", r.pass}});
      }
    }
  }

  json concentration = json::array();
  for (TestNoise noise : {TestNoise::gaussian, TestNoise::uniform}) {
    for (std::size_t n : {std::size_t{1}, std::size_t{2}, std::size_t{4}, std::size_t{8}}) {
      for (double delta : {0.1, 0.01, 1e-3}) {
        const auto r = verify_norm_concentration(n, 1.0, delta, kDefaultEpsilon, options.mc_samples, noise, ++seed);
        res.concentration_failures += r.pass ? 0 : 1;
        concentration.push_back({{"noise", noise == TestNoise::gaussian ? "gaussian" : "uniform"},
                                 {"n", n},
                                 {"delta", delta},
                                 {"radius", r.radius},
                                 {"violations", r.violations},
                                 {"samples", r.samples},
                                 {"rate", r.rate},
                                 {"threshold", r.threshold},
                                 {"pass", r.pass}});
      }
    }
  }

  res.pass = res.series_vs_quadrature <= options.series_tolerance && res.closed_form <= options.closed_form_tolerance &&
             res.decoupling_failures == 0 && res.concentration_failures == 0;
  res.report = {{"pass", res.pass},
                {"mc_samples", options.mc_samples},
                {"series_vs_quadrature", {{"tolerance", options.series_tolerance}, {"cases", series}}},
                {"closed_forms", {{"tolerance", options.closed_form_tolerance}, {"cases", closed}}},
                {"decoupling", decoupling},
                {"norm_concentration", concentration}};
  return res;
}

}  // namespace probreach
