#include "probreach/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "probreach/parallel.hpp"

namespace probreach {
namespace {

std::vector<Vector> draw_inputs(const ExperimentPreset& preset, std::size_t horizon, Rng& rng) {
  if (preset.input_policy == InputPolicy::nominal || preset.model.dim_input() == 0) return {};
  std::vector<Vector> inputs;
  inputs.reserve(horizon);
  for (std::size_t t = 0; t < horizon; ++t) inputs.push_back(sample_uniform(preset.model.input_set(), rng));
  return inputs;
}

std::vector<Vector> nominal_trajectory(const SystemModel& model, const Vector& x0, std::size_t horizon) {
  std::vector<Vector> xs{x0};
  const Vector u = model.nominal_input();
  for (std::size_t t = 0; t < horizon; ++t) {
    xs.push_back(model.step(xs.back(), u, t));
    if (!xs.back().allFinite()) throw DivergenceError(t + 1, "nominal trajectory diverged at step " + std::to_string(t + 1));
  }
  return xs;
}

}  // namespace

const char* backend_name(DrsBackend backend) {
  return backend == DrsBackend::lipschitz ? "lipschitz" : "interval";
}

TrajectoryEnsemble run_ensemble(const ExperimentPreset& preset, const EnsembleOptions& options) {
  require(options.n_traj >= 1, "run_ensemble needs n_traj >= 1");
  const std::size_t horizon = options.horizon ? options.horizon : preset.horizon;
  const NormSpec norm = options.norm.value_or(preset.norm);
  const std::size_t n = preset.model.dim_state();
  require(norm.dim() == n, "deviation norm has the wrong dimension");

  TrajectoryEnsemble ens;
  ens.n_traj = options.n_traj;
  ens.horizon = horizon;
  ens.dim = n;
  ens.seed = options.seed;
  ens.nominal = nominal_trajectory(preset.model, set_center(preset.initial_set), horizon);
  if (options.record_times.empty()) {
    for (std::size_t t = 0; t <= horizon; ++t) ens.record_times.push_back(t);
  } else {
    ens.record_times = options.record_times;
    std::sort(ens.record_times.begin(), ens.record_times.end());
    ens.record_times.erase(std::unique(ens.record_times.begin(), ens.record_times.end()), ens.record_times.end());
    require(ens.record_times.back() <= horizon, "record time beyond the horizon");
  }
  const std::size_t slots = ens.record_times.size();
  ens.deviations.assign(options.n_traj * slots, 0.0);
  if (options.keep_states) ens.states.assign(options.n_traj * (horizon + 1) * n, 0.0);

  parallel_for(options.n_traj, [&](std::size_t i) {
    Rng rng = make_stream(options.seed, i);
    const Vector x0 = sample_uniform(preset.initial_set, rng);
    const auto inputs = draw_inputs(preset, horizon, rng);
    // Same draws and arithmetic as simulate_pair, on reused buffers.
    Vector xs = x0, xd = x0, cand(n), w(n), scratch(n), next_d(n);
    const Vector u_nom = preset.model.nominal_input();
    double* out = options.keep_states ? ens.states.data() + i * (horizon + 1) * n : nullptr;
    std::size_t slot = 0;
    for (std::size_t t = 0;; ++t) {
      if (slot < slots && ens.record_times[slot] == t) ens.deviations[i * slots + slot++] = norm(xs - xd);
      if (out)
        for (std::size_t j = 0; j < n; ++j) out[t * n + j] = xs(static_cast<Eigen::Index>(j));
      if (t == horizon) break;
      const Vector& u = inputs.empty() ? u_nom : inputs[t];
      preset.model.step_into(xs, u, t, cand);
      preset.noise.sample_into(t, cand, rng, w, scratch);
      preset.model.step_into(xd, u, t, next_d);
      xs = cand + w;
      std::swap(xd, next_d);
      if (!xs.allFinite() || !xd.allFinite())
        throw DivergenceError(t + 1,
                              "trajectory " + std::to_string(i) + " diverged at step " + std::to_string(t + 1),
                              static_cast<long>(i));
    }
  });
  return ens;
}

double empirical_quantile_radius(const TrajectoryEnsemble& ensemble, double delta, std::size_t t) {
  require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
  const double expected = delta * static_cast<double>(ensemble.n_traj);
  if (expected < 1.0)
    throw std::invalid_argument("empirical_quantile_radius: n_traj * delta = " + std::to_string(expected) +
                                " < 1, not enough samples for this delta");
  auto values = ensemble.deviations_at(t);
  // Guard against δN landing a hair above an integer through rounding.
  auto k = static_cast<std::size_t>(std::ceil(expected - 1e-9 * expected));
  k = std::clamp<std::size_t>(k, 1, values.size());
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k - 1), values.end(),
                   std::greater<>());
  return values[k - 1];
}

double estimate_local_lipschitz(const SystemModel& model, const ReachSet& region, std::size_t n_pairs,
                                std::size_t t, const LipschitzEstimateOptions& options) {
  require(n_pairs >= 1000, "estimate_local_lipschitz needs at least 1e3 pairs");
  require(options.inflation >= 1.0, "inflation must be >= 1");
  require(set_dim(region) == model.dim_state(), "region has the wrong dimension");
  NormSpec norm = options.norm ? *options.norm
                               : (std::holds_alternative<BallSet>(region) ? std::get<BallSet>(region).norm()
                                                                          : NormSpec(model.dim_state()));
  const double diameter = set_radius(region, norm);
  if (!(diameter > 0.0)) throw std::invalid_argument("estimate_local_lipschitz: region has zero diameter");
  if (!std::isfinite(diameter)) throw std::invalid_argument("estimate_local_lipschitz: region is unbounded");

  constexpr std::size_t kBlock = 256;
  const std::size_t blocks = (n_pairs + kBlock - 1) / kBlock;
  std::vector<double> best(blocks, 0.0);
  parallel_for(blocks, [&](std::size_t b) {
    Rng rng = make_stream(options.seed ^ mix64(t), b);
    const std::size_t lo = b * kBlock, hi = std::min(n_pairs, lo + kBlock);
    for (std::size_t k = lo; k < hi; ++k) {
      const Vector x = sample_uniform(region, rng);
      Vector y = sample_uniform(region, rng);
      if (k % 2 == 1) y = x + 1e-3 * (y - x);
      const Vector u = model.dim_input() ? sample_uniform(model.input_set(), rng) : Vector(0);
      const double dx = norm(x - y);
      if (!(dx > 0.0)) continue;
      const double df = norm(model.step(x, u, t) - model.step(y, u, t));
      if (!std::isfinite(df)) throw NumericError("dynamics not finite inside the Lipschitz region");
      best[b] = std::max(best[b], df / dx);
    }
  });
  return options.inflation * *std::max_element(best.begin(), best.end());
}

ReachTube compute_reach_tube(const ExperimentPreset& preset, const TubeOptions& options) {
  ReachTube tube;
  tube.horizon = options.horizon ? options.horizon : preset.horizon;
  tube.delta = options.delta > 0.0 ? options.delta : preset.delta;
  tube.eps = epsilon_constants(options.epsilon > 0.0 ? options.epsilon : preset.epsilon);
  tube.backend = options.backend;
  require(tube.delta > 0.0 && tube.delta < 1.0, "delta must lie in (0, 1)");
  const std::size_t T = tube.horizon;
  const std::size_t n = preset.model.dim_state();
  const SystemModel& model = preset.model;

  tube.nominal = nominal_trajectory(model, set_center(preset.initial_set), T);
  const Vector u_nom = model.nominal_input();

  // Noise proxies.
  if (preset.noise.has_closed_form() || preset.noise.has_variance_proxy()) {
    for (std::size_t t = 0; t < T; ++t) tube.sigma2.push_back(preset.noise.variance_proxy(t, preset.norm));
  } else {
    double worst = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      CertifyOptions co;
      co.t = t;
      co.candidate = model.step(tube.nominal[t], u_nom, t);
      co.seed = mix64(options.seed ^ (0xce47ULL + t));
      const double s = certify_variance_proxy(preset.noise, preset.norm, options.certify_samples,
                                              default_lambda_grid(), co);
      worst = std::max(worst, s * s);
    }
    tube.sigma2.assign(T, worst);
  }

  // Deterministic over-approximation plus Lipschitz sequence, built forward
  // so that localized constants can see the current radius.
  std::optional<InclusionFunction> inclusion;
  IntervalBox input_box;
  if (options.backend == DrsBackend::interval) {
    require(preset.norm.is_euclidean(), "interval backend needs the Euclidean deviation norm");
    inclusion = natural_inclusion(model);
    if (model.dim_input() == 0) {
      input_box = IntervalBox(Vector(0), Vector(0));
    } else if (const auto* box = std::get_if<IntervalBox>(&model.input_set())) {
      input_box = *box;
    } else {
      throw ConfigError("interval backend needs a box input set");
    }
    const auto* x0_box = std::get_if<IntervalBox>(&preset.initial_set);
    if (!x0_box) throw ConfigError("interval backend needs a box initial set");
    tube.drs.emplace_back(*x0_box);
  } else {
    tube.drs.emplace_back(BallSet(tube.nominal[0], set_radius(preset.initial_set, preset.norm), preset.norm));
  }
  const double r2 = model.dim_input() ? set_radius(model.input_set(), preset.input_norm) : 0.0;
  const double n_d = static_cast<double>(n);

  std::vector<double> psi{0.0};
  auto radius_of = [&](double Psi) {
    return std::sqrt(Psi) * std::sqrt(tube.eps.eps1 * n_d + tube.eps.eps2 * std::log(1.0 / tube.delta));
  };
  for (std::size_t t = 0; t < T; ++t) {
    double L;
    if (preset.local_lipschitz) {
      const Vector c = set_center(tube.drs[t]);
      double reach = set_radius(tube.drs[t], preset.norm) + radius_of(psi[t]);
      // A point region (R_t = Ψ_t = 0) makes L_t irrelevant; probe a tiny ball.
      if (reach == 0.0) reach = 1e-6 * (1.0 + preset.norm(c));
      L = preset.local_lipschitz(BallSet(c, reach, preset.norm), t);
    } else {
      L = model.lipschitz(t);
    }
    if (!(L >= 0.0) || !std::isfinite(L)) throw NumericError("invalid Lipschitz constant at step " + std::to_string(t));
    tube.lipschitz.push_back(L);
    psi.push_back(L * L * psi[t] + tube.sigma2[t]);
    if (inclusion) {
      tube.drs.emplace_back(interval_step(*inclusion, std::get<IntervalBox>(tube.drs[t]), input_box, t));
    } else {
      const double R = L * std::get<BallSet>(tube.drs[t]).radius() + preset.input_lipschitz * r2;
      tube.drs.emplace_back(BallSet(tube.nominal[t + 1], R, preset.norm));
    }
  }

  tube.schedule = build_schedule(tube.lipschitz, tube.sigma2, T);
  for (std::size_t t = 0; t <= T; ++t) {
    tube.prs.push_back(make_prs(tube.drs[t], tube.schedule, n, tube.delta, tube.eps, t));
    tube.r_delta.push_back(tube.prs.back().inflation);
  }
  return tube;
}

DrsSoundness check_drs_soundness(const ExperimentPreset& preset, const ReachTube& tube, std::size_t n_traj,
                                 std::uint64_t seed) {
  require(n_traj >= 1, "check_drs_soundness needs n_traj >= 1");
  const std::size_t T = tube.horizon;
  std::vector<std::size_t> bad(n_traj, 0);
  std::vector<double> margin(n_traj, std::numeric_limits<double>::infinity());
  parallel_for(n_traj, [&](std::size_t i) {
    Rng rng = make_stream(seed, i);
    Vector x = sample_uniform(preset.initial_set, rng);
    const auto inputs = draw_inputs(preset, T, rng);
    for (std::size_t t = 0;; ++t) {
      double m;
      if (const auto* ball = std::get_if<BallSet>(&tube.drs[t])) {
        m = ball->radius() - ball->norm()(x - ball->center());
      } else {
        m = -distance_to(tube.drs[t], x);
      }
      margin[i] = std::min(margin[i], m);
      if (!set_contains(tube.drs[t], x)) bad[i] = 1;
      if (t == T) break;
      x = preset.model.step(x, inputs.empty() ? preset.model.nominal_input() : inputs[t], t);
    }
  });
  DrsSoundness out;
  out.trajectories = n_traj;
  for (std::size_t i = 0; i < n_traj; ++i) out.violations += bad[i];
  out.worst_margin = *std::min_element(margin.begin(), margin.end());
  return out;
}

}  // namespace probreach
