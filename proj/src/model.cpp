#include "probreach/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace probreach {

SystemModel::SystemModel(std::string name, std::size_t dim_state, std::size_t dim_input, StepFn step,
                         LipschitzFn lipschitz, ReachSet input_set)
    : name_(std::move(name)),
      dim_state_(dim_state),
      dim_input_(dim_input),
      step_(std::move(step)),
      lipschitz_(std::move(lipschitz)),
      input_set_(std::move(input_set)) {
  require(dim_state_ > 0, "system dimension must be positive");
  require(static_cast<bool>(step_), "system needs a step function");
  require(set_dim(input_set_) == dim_input_, "input set dimension differs from dim_input");
}

SystemModel SystemModel::from_expressions(std::string name, std::vector<Expr> dynamics, std::size_t dim_input,
                                          LipschitzFn lipschitz, ReachSet input_set) {
  const std::size_t n = dynamics.size();
  require(n > 0, "dynamics need at least one coordinate");
  for (const auto& e : dynamics) {
    require(e.state_arity() <= n, "dynamics reference a state coordinate beyond the dimension");
    require(e.input_arity() <= dim_input, "dynamics reference an input coordinate beyond dim_input");
  }
  auto tapes = std::make_shared<std::vector<CompiledExpr>>(dynamics.begin(), dynamics.end());
  auto step = [tapes, n](const Vector& x, const Vector& u, std::size_t) {
    Vector out(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) out(static_cast<Eigen::Index>(i)) = (*tapes)[i](x.data(), u.data());
    return out;
  };
  SystemModel model(std::move(name), n, dim_input, std::move(step), std::move(lipschitz), std::move(input_set));
  model.expressions_ = std::move(dynamics);
  model.tapes_ = std::move(tapes);
  return model;
}

Vector SystemModel::step(const Vector& x, const Vector& u, std::size_t t) const {
  require(static_cast<std::size_t>(x.size()) == dim_state_, "step: state dimension mismatch");
  require(static_cast<std::size_t>(u.size()) == dim_input_, "step: input dimension mismatch");
  return step_(x, u, t);
}

void SystemModel::step_into(const Vector& x, const Vector& u, std::size_t t, Vector& out) const {
  if (tapes_) {
    out.resize(static_cast<Eigen::Index>(dim_state_));
    for (std::size_t i = 0; i < dim_state_; ++i) out(static_cast<Eigen::Index>(i)) = (*tapes_)[i](x.data(), u.data());
    return;
  }
  out = step(x, u, t);
}

double SystemModel::lipschitz(std::size_t t) const {
  if (!lipschitz_) throw std::invalid_argument("system '" + name_ + "' has no Lipschitz constants");
  const double l = lipschitz_(t);
  if (!std::isfinite(l) || l < 0.0)
    throw std::invalid_argument("Lipschitz constant at t=" + std::to_string(t) + " is negative or non-finite");
  return l;
}

SystemModel SystemModel::with_lipschitz(LipschitzFn lipschitz) const {
  SystemModel copy = *this;
  copy.lipschitz_ = std::move(lipschitz);
  return copy;
}

SystemModel SystemModel::with_lipschitz(std::vector<double> per_step) const {
  require(!per_step.empty(), "Lipschitz sequence is empty");
  return with_lipschitz([seq = std::move(per_step)](std::size_t t) {
    if (t >= seq.size()) throw std::out_of_range("Lipschitz sequence does not cover t=" + std::to_string(t));
    return seq[t];
  });
}

const char* noise_kind_name(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::gaussian:
      return "gaussian";
    case NoiseKind::truncated_gaussian:
      return "truncated_gaussian";
    case NoiseKind::uniform_box:
      return "uniform_box";
    case NoiseKind::custom_sampler:
      return "custom_sampler";
  }
  return "?";
}

namespace {

Matrix mixing_or_identity(const std::optional<Matrix>& mixing, std::size_t dim) {
  if (!mixing) return Matrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  require(mixing->rows() == mixing->cols() && static_cast<std::size_t>(mixing->cols()) == dim,
          "noise mixing matrix must be square with the noise dimension");
  require(mixing->allFinite(), "noise mixing matrix must be finite");
  return *mixing;
}

void check_scales(const Vector& scales) {
  require(scales.size() > 0, "noise needs at least one coordinate");
  require(scales.allFinite() && (scales.array() >= 0.0).all(), "noise scales must be finite and non-negative");
}

}  // namespace

NoiseSpec NoiseSpec::gaussian(Vector scales, std::optional<Matrix> mixing) {
  check_scales(scales);
  NoiseSpec spec(NoiseKind::gaussian, static_cast<std::size_t>(scales.size()));
  spec.mixing_ = mixing_or_identity(mixing, spec.dim_);
  spec.identity_mixing_ = spec.mixing_.isIdentity(0.0);
  spec.scales_ = std::move(scales);
  return spec;
}

NoiseSpec NoiseSpec::truncated_gaussian(Vector scales, TruncationCap cap, std::optional<Matrix> mixing) {
  check_scales(scales);
  require(static_cast<bool>(cap), "truncated gaussian needs a truncation cap");
  NoiseSpec spec(NoiseKind::truncated_gaussian, static_cast<std::size_t>(scales.size()));
  spec.mixing_ = mixing_or_identity(mixing, spec.dim_);
  spec.identity_mixing_ = spec.mixing_.isIdentity(0.0);
  spec.scales_ = std::move(scales);
  spec.cap_ = std::move(cap);
  return spec;
}

NoiseSpec NoiseSpec::uniform_box(Vector half_widths, std::optional<Matrix> mixing) {
  check_scales(half_widths);
  NoiseSpec spec(NoiseKind::uniform_box, static_cast<std::size_t>(half_widths.size()));
  spec.mixing_ = mixing_or_identity(mixing, spec.dim_);
  spec.identity_mixing_ = spec.mixing_.isIdentity(0.0);
  spec.scales_ = std::move(half_widths);
  return spec;
}

NoiseSpec NoiseSpec::custom(std::size_t dim, NoiseSampler sampler, ProxyFn sigma2) {
  require(dim > 0, "noise dimension must be positive");
  require(static_cast<bool>(sampler), "custom noise needs a sampler");
  NoiseSpec spec(NoiseKind::custom_sampler, dim);
  spec.mixing_ = Matrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  spec.sampler_ = std::move(sampler);
  spec.proxy_ = std::move(sigma2);
  return spec;
}

Vector NoiseSpec::sample(std::size_t t, const Vector& candidate, Rng& rng) const {
  Vector out, scratch;
  sample_into(t, candidate, rng, out, scratch);
  return out;
}

void NoiseSpec::sample_into(std::size_t t, const Vector& candidate, Rng& rng, Vector& out, Vector& scratch) const {
  const auto n = static_cast<Eigen::Index>(dim_);
  if (kind_ == NoiseKind::custom_sampler) {
    out = sampler_(t, candidate, rng);
    require(out.size() == n, "custom sampler returned a vector of the wrong dimension");
    return;
  }
  Vector& g = identity_mixing_ ? out : scratch;
  g.resize(n);
  switch (kind_) {
    case NoiseKind::gaussian: {
      std::normal_distribution<double> normal(0.0, 1.0);
      for (Eigen::Index i = 0; i < n; ++i) g(i) = scales_(i) * normal(rng);
      break;
    }
    case NoiseKind::truncated_gaussian: {
      std::normal_distribution<double> normal(0.0, 1.0);
      const Vector cap = cap_(t, candidate);
      require(cap.size() == n, "truncation cap has the wrong dimension");
      for (Eigen::Index i = 0; i < n; ++i) {
        const double draw = scales_(i) * normal(rng);
        g(i) = std::abs(draw) <= std::abs(cap(i)) ? draw : cap(i);
      }
      break;
    }
    case NoiseKind::uniform_box: {
      std::uniform_real_distribution<double> unit(-1.0, 1.0);
      for (Eigen::Index i = 0; i < n; ++i) g(i) = scales_(i) * unit(rng);
      break;
    }
    case NoiseKind::custom_sampler:
      break;
  }
  if (!identity_mixing_) out.noalias() = mixing_ * g;
}

double NoiseSpec::closed_form_sigma(const NormSpec& norm) const {
  require(has_closed_form(), std::string("no closed-form proxy for ") + noise_kind_name(kind_) + " noise");
  require(norm.dim() == dim_, "norm and noise dimensions differ");
  const Matrix m = norm.transform() * mixing_ * scales_.asDiagonal();
  if (m.isZero(0.0)) return 0.0;
  // Diagonal fast path keeps the isotropic case exact.
  if (norm.is_diagonal() && mixing_.isDiagonal(0.0)) return m.diagonal().cwiseAbs().maxCoeff();
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double NoiseSpec::variance_proxy(std::size_t t, const NormSpec& norm) const {
  if (proxy_) {
    const double s2 = proxy_(t);
    if (!std::isfinite(s2) || s2 < 0.0)
      throw std::invalid_argument("variance proxy at t=" + std::to_string(t) + " is negative or non-finite");
    return s2;
  }
  if (has_closed_form()) {
    const double s = closed_form_sigma(norm);
    return s * s;
  }
  throw std::invalid_argument(std::string(noise_kind_name(kind_)) +
                              " noise has no certified variance proxy; run certify_variance_proxy first");
}

NoiseSpec NoiseSpec::with_variance_proxy(ProxyFn sigma2) const {
  NoiseSpec copy = *this;
  copy.proxy_ = std::move(sigma2);
  return copy;
}

std::vector<double> default_lambda_grid() {
  std::vector<double> grid;
  for (int k = 1; k <= 40; ++k) {
    grid.push_back(0.25 * k);
    grid.push_back(-0.25 * k);
  }
  return grid;
}

double certify_variance_proxy(const NoiseSpec& noise, const NormSpec& norm, std::size_t n_samples,
                              const std::vector<double>& lambda_grid, const CertifyOptions& options) {
  require(n_samples >= 10000, "certify_variance_proxy needs at least 1e4 samples");
  require(norm.dim() == noise.dim(), "norm and noise dimensions differ");
  require(!lambda_grid.empty(), "lambda grid is empty");
  const auto [lo, hi] = std::minmax_element(lambda_grid.begin(), lambda_grid.end());
  require(*lo <= -10.0 && *hi >= 10.0, "lambda grid must span at least [-10, 10]");
  require(options.safety_factor >= 1.0, "safety factor must be >= 1");
  if (noise.has_closed_form()) return noise.closed_form_sigma(norm);

  const auto n = static_cast<Eigen::Index>(noise.dim());
  const Vector candidate = options.candidate.size() ? options.candidate : Vector::Zero(n);
  Rng rng = make_stream(options.seed, 0);
  Matrix z(n, static_cast<Eigen::Index>(n_samples));
  for (std::size_t k = 0; k < n_samples; ++k) {
    const Vector w = noise.sample(options.t, candidate, rng);
    if (!w.allFinite()) throw NumericError("noise sampler produced a non-finite value");
    z.col(static_cast<Eigen::Index>(k)) = norm.to_frame(w);
  }
  if (z.isZero(0.0)) return 0.0;

  // Sub-Gaussian proxies are defined for centred noise: a significant mean is
  // an error, sampling jitter in the mean is removed.
  const Vector mean = z.rowwise().mean();
  z.colwise() -= mean;
  const Matrix cov = z * z.transpose() / static_cast<double>(n_samples);
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::abs(mean(i)) > 5.0 * std::sqrt(cov(i, i) / static_cast<double>(n_samples)) + 1e-300)
      throw NumericError("noise samples are not centred (coordinate " + std::to_string(i) + " of the norm frame)");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
  const double scale = std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
  if (scale == 0.0) return 0.0;

  std::vector<Vector> directions;
  directions.emplace_back(eig.eigenvectors().col(n - 1));
  for (Eigen::Index i = 0; i < n; ++i) directions.emplace_back(Vector::Unit(n, i));
  Rng dir_rng = make_stream(options.seed, 1);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t k = 0; k < options.n_directions; ++k) {
    Vector d(n);
    for (Eigen::Index i = 0; i < n; ++i) d(i) = normal(dir_rng);
    if (d.norm() > 0.0) directions.emplace_back(d.normalized());
  }

  const double log_n = std::log(static_cast<double>(n_samples));
  double worst_sigma2 = 0.0;
  double worst_variance = 0.0;
  std::vector<double> proj(n_samples);
  for (const auto& ell : directions) {
    for (std::size_t k = 0; k < n_samples; ++k) proj[k] = ell.dot(z.col(static_cast<Eigen::Index>(k)));
    double m = 0.0;
    for (double p : proj) m += p * p;
    worst_variance = std::max(worst_variance, m / static_cast<double>(n_samples));
    for (double lambda : lambda_grid) {
      if (lambda == 0.0) continue;
      const double theta = lambda / scale;
      double top = -std::numeric_limits<double>::infinity();
      for (double p : proj) top = std::max(top, theta * p);
      double acc = 0.0;
      for (double p : proj) acc += std::exp(theta * p - top);
      const double log_mgf = top + std::log(acc) - log_n;
      if (!std::isfinite(log_mgf)) throw NumericError("empirical MGF diverges on the lambda grid");
      worst_sigma2 = std::max(worst_sigma2, 2.0 * log_mgf / (theta * theta));
    }
  }
  if (worst_variance > 0.0 && worst_sigma2 > options.divergence_ratio * worst_variance)
    throw NumericError("empirical MGF grows faster than any sub-Gaussian bound on the lambda grid (ratio " +
                       std::to_string(worst_sigma2 / worst_variance) + ")");
  return options.safety_factor * std::sqrt(worst_sigma2);
}

TrajectoryPair simulate_pair(const SystemModel& model, const NoiseSpec& noise, const Vector& x0,
                             const std::vector<Vector>& inputs, std::size_t horizon, Rng& rng) {
  require(static_cast<std::size_t>(x0.size()) == model.dim_state(), "x0 has the wrong dimension");
  require(noise.dim() == model.dim_state(), "noise and state dimensions differ");
  require(x0.allFinite(), "x0 must be finite");
  require(inputs.empty() || inputs.size() >= horizon, "input sequence shorter than the horizon");
  const Vector nominal_u = model.nominal_input();
  TrajectoryPair pair;
  pair.stochastic.reserve(horizon + 1);
  pair.deterministic.reserve(horizon + 1);
  pair.stochastic.push_back(x0);
  pair.deterministic.push_back(x0);
  for (std::size_t t = 0; t < horizon; ++t) {
    const Vector& u = inputs.empty() ? nominal_u : inputs[t];
    const Vector candidate = model.step(pair.stochastic.back(), u, t);
    Vector next = candidate + noise.sample(t, candidate, rng);
    Vector det = model.step(pair.deterministic.back(), u, t);
    if (!next.allFinite() || !det.allFinite())
      throw DivergenceError(t + 1, "non-finite state at step " + std::to_string(t + 1));
    pair.stochastic.push_back(std::move(next));
    pair.deterministic.push_back(std::move(det));
  }
  return pair;
}

TrajectoryPair simulate_pair(const SystemModel& model, const NoiseSpec& noise, const Vector& x0,
                             const std::vector<Vector>& inputs, std::size_t horizon, std::uint64_t seed) {
  Rng rng = make_stream(seed, 0);
  return simulate_pair(model, noise, x0, inputs, horizon, rng);
}

}  // namespace probreach
