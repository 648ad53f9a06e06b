#include "probreach/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

namespace probreach {
namespace {

using nlohmann::json;

TubeOptions tube_options(const RunOptions& o) {
  TubeOptions t;
  t.backend = o.backend;
  t.delta = o.delta;
  t.epsilon = o.epsilon;
  t.horizon = o.horizon;
  t.seed = o.seed;
  return t;
}

EnsembleOptions ensemble_options(const ExperimentPreset& preset, const RunOptions& o, std::size_t horizon) {
  EnsembleOptions e;
  e.n_traj = o.samples ? o.samples : preset.trajectories;
  e.seed = o.seed;
  e.horizon = horizon;
  e.keep_states = true;
  return e;
}

std::string time_column(std::size_t i) { return fmt::format("x{}", i); }

Table quantile_table(const TrajectoryEnsemble& ens, const ReachTube& tube, std::size_t n) {
  Table tab({"t", "r_hat", "max_deviation", "mean_sq_deviation", "expectation_bound", "r_amgf", "violations",
             "violation_rate", "threshold"});
  const double N = static_cast<double>(ens.n_traj);
  const bool quantile_ok = tube.delta * N >= 1.0;
  for (std::size_t t : ens.record_times) {
    const auto dev = ens.deviations_at(t);
    double mx = 0.0, sq = 0.0;
    std::size_t bad = 0;
    for (double d : dev) {
      mx = std::max(mx, d);
      sq += d * d;
      bad += d > tube.r_delta[t] ? 1 : 0;
    }
    tab.add_row({num(t), quantile_ok ? num(empirical_quantile_radius(ens, tube.delta, t)) : "nan", num(mx),
                 num(sq / N), num(expectation_bound(tube.schedule, n, t)), num(tube.r_delta[t]), num(bad),
                 num(static_cast<double>(bad) / N), num(tube.delta + 3.0 * std::sqrt(tube.delta / N))});
  }
  return tab;
}

Table coverage_table(const std::vector<CoverageRow>& rows, const std::string& backend) {
  Table tab({"backend", "t", "inside", "total", "coverage", "threshold", "worst_margin", "pass"});
  for (const auto& r : rows)
    tab.add_row({backend, num(r.t), num(r.inside), num(r.total), num(r.coverage), num(r.threshold),
                 num(r.worst_margin), num(r.pass)});
  return tab;
}

Table drs_table(const ReachTube& tube, std::size_t n) {
  std::vector<std::string> cols{"t"};
  const bool ball = std::holds_alternative<BallSet>(tube.drs.front());
  if (ball) {
    for (std::size_t i = 0; i < n; ++i) cols.push_back(fmt::format("center_{}", i));
    cols.push_back("radius");
  } else {
    for (std::size_t i = 0; i < n; ++i) cols.push_back(fmt::format("lower_{}", i));
    for (std::size_t i = 0; i < n; ++i) cols.push_back(fmt::format("upper_{}", i));
  }
  Table tab(cols);
  for (std::size_t t = 0; t < tube.drs.size(); ++t) {
    std::vector<std::string> row{num(t)};
    if (const auto* b = std::get_if<BallSet>(&tube.drs[t])) {
      for (Eigen::Index i = 0; i < b->center().size(); ++i) row.push_back(num(b->center()(i)));
      row.push_back(num(b->radius()));
    } else {
      const auto& box = std::get<IntervalBox>(tube.drs[t]);
      for (Eigen::Index i = 0; i < box.lower().size(); ++i) row.push_back(num(box.lower()(i)));
      for (Eigen::Index i = 0; i < box.upper().size(); ++i) row.push_back(num(box.upper()(i)));
    }
    tab.add_row(std::move(row));
  }
  return tab;
}

Table prs_table(const ReachTube& tube, std::size_t n) {
  Table base = drs_table(tube, n);
  std::vector<std::string> cols = base.header;
  cols.push_back("inflation");
  Table tab(cols);
  for (std::size_t t = 0; t < base.rows.size(); ++t) {
    auto row = base.rows[t];
    row.push_back(num(tube.r_delta[t]));
    tab.add_row(std::move(row));
  }
  return tab;
}

json set_json(const ReachSet& s) {
  if (const auto* b = std::get_if<BallSet>(&s))
    return {{"kind", "ball"}, {"center", vector_json(b->center())}, {"radius", b->radius()},
            {"weight_diagonal", vector_json(b->norm().weight().diagonal())}};
  const auto& box = std::get<IntervalBox>(s);
  return {{"kind", "box"}, {"lower", vector_json(box.lower())}, {"upper", vector_json(box.upper())}};
}

json cloud_json(const std::vector<Vector>& pts) {
  json arr = json::array();
  for (const auto& p : pts) arr.push_back(vector_json(p));
  return arr;
}

json states_json(const TrajectoryEnsemble& ens, std::size_t t, const std::vector<std::size_t>& dims) {
  json arr = json::array();
  for (std::size_t i = 0; i < ens.n_traj; ++i) {
    const Vector x = ens.state(i, t);
    json p = json::array();
    for (std::size_t d : dims) p.push_back(x(static_cast<Eigen::Index>(d)));
    arr.push_back(std::move(p));
  }
  return arr;
}

void add_coverage_checks(ReportBundle& b, const std::string& prefix, const std::vector<CoverageRow>& rows,
                         const std::vector<std::size_t>& times) {
  if (times.size() > 8) {
    // Long horizons: one check, per-step counts stay in coverage.csv.
    std::size_t bad = 0, worst_t = times.front(), worst_out = 0;
    for (std::size_t t : times) {
      const auto& r = rows.at(t);
      const std::size_t out = r.total - r.inside;
      if (out > 0) ++bad;
      if (out > worst_out) worst_out = out, worst_t = t;
    }
    b.add_check(prefix + "_coverage_all_t", bad == 0,
                fmt::format("{} of {} steps with samples outside; worst t = {} ({} outside of {})", bad,
                            times.size(), worst_t, worst_out, rows.at(worst_t).total));
    return;
  }
  for (std::size_t t : times) {
    const auto& r = rows.at(t);
    b.add_check(fmt::format("{}_coverage_t{}", prefix, t), r.inside == r.total,
                fmt::format("{}/{} inside, threshold {:.6g}", r.inside, r.total, r.threshold));
  }
}

void add_expectation_check(ReportBundle& b, const std::string& prefix, const TrajectoryEnsemble& ens,
                           const ReachTube& tube, std::size_t n) {
  // For Gaussian noise on a linear map nΨ_t is the exact second moment, so
  // the Monte Carlo mean straddles it; the check allows three standard errors.
  double worst_slack = std::numeric_limits<double>::infinity();
  double worst_z = -std::numeric_limits<double>::infinity();
  const double N = static_cast<double>(ens.n_traj);
  for (std::size_t t : ens.record_times) {
    if (t == 0) continue;
    double s1 = 0.0, s2 = 0.0;
    for (double d : ens.deviations_at(t)) {
      s1 += d * d;
      s2 += d * d * d * d;
    }
    const double mean = s1 / N;
    const double se = std::sqrt(std::max(0.0, s2 / N - mean * mean) / N);
    const double bound = expectation_bound(tube.schedule, n, t);
    worst_slack = std::min(worst_slack, bound - mean);
    if (se > 0.0) worst_z = std::max(worst_z, (mean - bound) / se);
  }
  b.add_check(prefix + "_expectation_bound_3se", worst_z <= 3.0,
              fmt::format("min slack n*Psi_t - mean sq = {:.6g}, max excess {:.3g} standard errors", worst_slack,
                          worst_z));
}

std::vector<std::size_t> all_times(std::size_t T) {
  std::vector<std::size_t> ts(T + 1);
  for (std::size_t t = 0; t <= T; ++t) ts[t] = t;
  return ts;
}

json fit_json(const std::vector<double>& x, const std::vector<double>& y) {
  return {{"x", x}, {"y", y}, {"r_squared", r_squared(x, y)}};
}

void scaling_study(ReportBundle& b, const RunOptions& o) {
  constexpr std::size_t t_fix = 25;
  const std::size_t samples = o.scaling_samples ? o.scaling_samples : (o.full ? 10'000'000 : 100'000);
  const std::vector<double> deltas = o.full ? std::vector<double>{1e-1, 1e-2, 1e-3, 1e-4}
                                            : std::vector<double>{1e-1, 3e-2, 1e-2};
  const double delta_n = o.full ? 1e-4 : 1e-2;
  const std::vector<std::size_t> dims{2, 4, 8};
  const auto eps = epsilon_constants(o.epsilon > 0.0 ? o.epsilon : kDefaultEpsilon);

  Table tab({"sweep", "n", "delta", "log_inv_delta", "r2_bound", "r2_hat", "samples"});
  std::vector<double> xd, yd, xn, yn, bd, bn;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    const std::size_t n = dims[k];
    const auto preset = linear_preset(n);
    EnsembleOptions eo;
    eo.n_traj = samples;
    eo.seed = mix64(o.seed + 0x5ca1e + k);
    eo.keep_states = false;
    eo.horizon = t_fix;
    eo.record_times = {t_fix};
    const auto ens = run_ensemble(preset, eo);
    const auto sched = constant_schedule(0.93, 0.2, t_fix);
    auto emit = [&](const char* sweep, double delta) {
      const double r = empirical_quantile_radius(ens, delta, t_fix);
      const double bound = amgf_bound(sched, n, delta, eps, t_fix);
      tab.add_row({sweep, num(n), num(delta), num(std::log(1.0 / delta)), num(bound * bound), num(r * r),
                   num(samples)});
      return std::pair{r * r, bound * bound};
    };
    if (n == 2)
      for (double d : deltas) {
        auto [r2, b2] = emit("delta", d);
        xd.push_back(std::log(1.0 / d));
        yd.push_back(r2);
        bd.push_back(b2);
      }
    auto [r2, b2] = emit("n", delta_n);
    xn.push_back(static_cast<double>(n));
    yn.push_back(r2);
    bn.push_back(b2);
  }
  b.add_csv("scaling.csv", tab);
  const double fit_d = r_squared(xd, yd), fit_n = r_squared(xn, yn);
  b.add_json("scaling_fit.json", {{"t", t_fix},
                                  {"samples", samples},
                                  {"delta_sweep", fit_json(xd, yd)},
                                  {"delta_sweep_bound", fit_json(xd, bd)},
                                  {"n_sweep", fit_json(xn, yn)},
                                  {"n_sweep_bound", fit_json(xn, bn)}});
  b.add_check("scaling_log_inv_delta_r2", fit_d >= 0.95, fmt::format("R^2 = {:.6f}", fit_d));
  b.add_check("scaling_n_r2", fit_n >= 0.95, fmt::format("R^2 = {:.6f}", fit_n));
}

ReportBundle linear_experiment(const RunOptions& o) {
  auto preset = linear_preset(2);
  const auto tube = compute_reach_tube(preset, tube_options(o));
  const std::size_t n = preset.model.dim_state();
  ReportBundle b;
  b.add_csv("bounds.csv", bounds_table(tube, n));
  const auto ens = run_ensemble(preset, ensemble_options(preset, o, tube.horizon));
  b.add_csv("quantiles.csv", quantile_table(ens, tube, n));
  const auto cov = coverage_check(tube.prs, ens);
  b.add_csv("coverage.csv", coverage_table(cov, backend_name(tube.backend)));

  Table traj({"trajectory", "t", "x0", "x1", "deviation", "r_amgf", "r_worstcase"});
  const auto eps = tube.eps;
  for (std::size_t i = 0; i < std::min<std::size_t>(ens.n_traj, 200); ++i)
    for (std::size_t t = 0; t <= ens.horizon; ++t) {
      const Vector x = ens.state(i, t);
      traj.add_row({num(i), num(t), num(x(0)), num(x(1)), num(ens.deviation(i, t)), num(tube.r_delta[t]),
                    num(worstcase_bound(tube.schedule, n, tube.delta, eps, t))});
    }
  b.add_csv("trajectories.csv", traj);

  add_coverage_checks(b, "linear", cov, all_times(tube.horizon));
  add_expectation_check(b, "linear", ens, tube, n);
  scaling_study(b, o);
  return b;
}

ReportBundle cobweb_experiment(const RunOptions& o) {
  const auto preset = cobweb_preset();
  const std::size_t n = 2;
  ReportBundle b;
  RunOptions lo = o;
  lo.backend = DrsBackend::lipschitz;
  RunOptions io = o;
  io.backend = DrsBackend::interval;
  const auto tube = compute_reach_tube(preset, tube_options(lo));
  const auto itube = compute_reach_tube(preset, tube_options(io));
  const auto ens = run_ensemble(preset, ensemble_options(preset, o, tube.horizon));

  Table bounds = bounds_table(tube, n);
  b.add_csv("bounds.csv", bounds);
  Table lip({"t", "L", "sigma2"});
  for (std::size_t t = 0; t < tube.horizon; ++t) lip.add_row({num(t), num(tube.lipschitz[t]), num(tube.sigma2[t])});
  b.add_csv("lipschitz.csv", lip);
  b.add_csv("quantiles.csv", quantile_table(ens, tube, n));
  const auto cov = coverage_check(tube.prs, ens);
  const auto icov = coverage_check(itube.prs, ens);
  Table covtab = coverage_table(cov, "lipschitz");
  for (auto& r : coverage_table(icov, "interval").rows) covtab.add_row(r);
  b.add_csv("coverage.csv", covtab);
  b.add_csv("drs_lipschitz.csv", drs_table(tube, n));
  b.add_csv("drs_interval.csv", drs_table(itube, n));

  const std::vector<std::size_t> fig_times{1, 2, 3, 5};
  json panels = json::array();
  for (std::size_t t : fig_times) {
    if (t > tube.horizon) continue;
    panels.push_back({{"t", t},
                      {"drs", set_json(tube.drs[t])},
                      {"inflation", tube.r_delta[t]},
                      {"prs_boundary", cloud_json(boundary_cloud(tube.prs[t], {0, 1}, 128))},
                      {"interval_drs", set_json(itube.drs[t])},
                      {"interval_prs_boundary", cloud_json(boundary_cloud(itube.prs[t], {0, 1}, 128))},
                      {"states", states_json(ens, t, {0, 1})}});
  }
  b.add_json("prs_geometry.json", {{"axes", {"p", "q"}}, {"panels", panels}});

  const auto sound = check_drs_soundness(preset, tube, 1000, mix64(o.seed + 0xd75));
  const auto isound = check_drs_soundness(preset, itube, 1000, mix64(o.seed + 0xd75));
  b.add_json("noise.json", {{"sigma", std::sqrt(tube.sigma2.front())},
                            {"sigma2", tube.sigma2.front()},
                            {"note", "certified along the nominal trajectory, maximum over the horizon"}});
  std::vector<std::size_t> times;
  for (std::size_t t : fig_times)
    if (t <= tube.horizon) times.push_back(t);
  add_coverage_checks(b, "cobweb_lipschitz", cov, times);
  add_coverage_checks(b, "cobweb_interval", icov, times);
  b.add_check("cobweb_drs_lipschitz_sound", sound.violations == 0,
              fmt::format("{} of {} noiseless trajectories left the DRS", sound.violations, sound.trajectories));
  b.add_check("cobweb_drs_interval_sound", isound.violations == 0,
              fmt::format("{} of {} noiseless trajectories left the boxes", isound.violations, isound.trajectories));
  return b;
}

ReportBundle uav_experiment(const RunOptions& o) {
  const UavOptions uo;
  const auto preset = uav_preset(uo);
  const std::size_t n = 4;
  ReportBundle b;
  RunOptions lo = o;
  lo.backend = DrsBackend::lipschitz;
  const auto tube = compute_reach_tube(preset, tube_options(lo));
  const auto ens = run_ensemble(preset, ensemble_options(preset, o, tube.horizon));

  b.add_csv("bounds.csv", bounds_table(tube, n));
  Table lip({"t", "L", "sigma2", "drs_radius"});
  for (std::size_t t = 0; t < tube.horizon; ++t)
    lip.add_row({num(t), num(tube.lipschitz[t]), num(tube.sigma2[t]), num(std::get<BallSet>(tube.drs[t]).radius())});
  b.add_csv("lipschitz.csv", lip);
  b.add_csv("quantiles.csv", quantile_table(ens, tube, n));
  const auto cov = coverage_check(tube.prs, ens);
  b.add_csv("coverage.csv", coverage_table(cov, "lipschitz"));

  Table conv({"t", "cross_track_error", "altitude_error", "total_error"});
  std::vector<double> total;
  for (std::size_t t = 0; t <= tube.horizon; ++t) {
    const double e = uav::cross_track_error(tube.nominal[t], uo.line);
    const double h = uav::altitude_error(tube.nominal[t], uo.line);
    total.push_back(std::abs(e) + std::abs(h));
    conv.add_row({num(t), num(e), num(h), num(total.back())});
  }
  b.add_csv("convergence.csv", conv);
  bool decreasing = true;
  std::size_t first_bad = 0;
  for (std::size_t t = 51; t < total.size(); ++t)
    if (!(total[t] < total[t - 1])) {
      decreasing = false;
      first_bad = t;
      break;
    }
  b.add_check("uav_convergence", decreasing && total.size() > 51,
              decreasing ? fmt::format("|e|+|h| strictly decreasing on (50, {}], final {:.3g}", tube.horizon,
                                       total.back())
                         : fmt::format("error does not decrease at t = {}", first_bad));

  json tube_json = json::array();
  for (std::size_t t = 0; t <= tube.horizon; ++t) {
    json entry = {{"t", t}, {"drs", set_json(tube.drs[t])}, {"inflation", tube.r_delta[t]}};
    if (t % 10 == 0 && t > 0) entry["prs_boundary_xyz"] = cloud_json(boundary_cloud(tube.prs[t], {0, 1, 2}, 200));
    tube_json.push_back(std::move(entry));
  }
  json nominal = json::array();
  for (const auto& x : tube.nominal) nominal.push_back(vector_json(x));
  json examples = json::array();
  for (std::size_t i = 0; i < std::min<std::size_t>(2, ens.n_traj); ++i) {
    json tr = json::array();
    for (std::size_t t = 0; t <= ens.horizon; ++t) tr.push_back(vector_json(ens.state(i, t)));
    examples.push_back(std::move(tr));
  }
  json samples = json::array();
  for (std::size_t t : {std::size_t{50}, std::size_t{100}, std::size_t{150}, std::size_t{200}})
    if (t <= ens.horizon) samples.push_back({{"t", t}, {"positions", states_json(ens, t, {0, 1, 2})}});
  b.add_json("tube.json", {{"line", {{"origin", vector_json(uo.line.origin)}, {"direction", vector_json(uo.line.direction)}}},
                           {"tube", tube_json},
                           {"nominal", nominal},
                           {"example_trajectories", examples},
                           {"sampled_states", samples}});

  add_coverage_checks(b, "uav", cov, all_times(tube.horizon));
  add_expectation_check(b, "uav", ens, tube, n);
  return b;
}

}  // namespace

Table bounds_table(const ReachTube& tube, std::size_t n) {
  Table tab({"t", "Psi", "r_amgf", "r_markov", "r_worstcase"});
  for (std::size_t t = 0; t <= tube.horizon; ++t)
    tab.add_row({num(t), num(tube.schedule.Psi[t]), num(amgf_bound(tube.schedule, n, tube.delta, tube.eps, t)),
                 num(markov_bound(tube.schedule, n, tube.delta, t)),
                 num(worstcase_bound(tube.schedule, n, tube.delta, tube.eps, t))});
  return tab;
}

ReportBundle bound_report(const ExperimentPreset& preset, const RunOptions& options) {
  const auto tube = compute_reach_tube(preset, tube_options(options));
  ReportBundle b;
  b.add_csv("bounds.csv", bounds_table(tube, preset.model.dim_state()));
  return b;
}

ReportBundle drs_report(const ExperimentPreset& preset, const RunOptions& options) {
  const auto tube = compute_reach_tube(preset, tube_options(options));
  ReportBundle b;
  b.add_csv("drs.csv", drs_table(tube, preset.model.dim_state()));
  return b;
}

ReportBundle prs_report(const ExperimentPreset& preset, const RunOptions& options) {
  const auto tube = compute_reach_tube(preset, tube_options(options));
  const std::size_t n = preset.model.dim_state();
  const auto ens = run_ensemble(preset, ensemble_options(preset, options, tube.horizon));
  const auto cov = coverage_check(tube.prs, ens);
  ReportBundle b;
  b.add_csv("prs.csv", prs_table(tube, n));
  b.add_csv("coverage.csv", coverage_table(cov, backend_name(tube.backend)));
  std::vector<std::size_t> dims;
  for (std::size_t i = 0; i < std::min<std::size_t>(n, 3); ++i) dims.push_back(i);
  json sets = json::array();
  for (std::size_t t = 0; t <= tube.horizon; ++t) {
    json e = {{"t", t}, {"base", set_json(tube.drs[t])}, {"inflation", tube.r_delta[t]}};
    if (dims.size() >= 2) e["boundary"] = cloud_json(boundary_cloud(tube.prs[t], dims, dims.size() == 2 ? 128 : 200));
    sets.push_back(std::move(e));
  }
  b.add_json("prs_geometry.json", {{"dims", dims}, {"sets", sets}});
  bool ok = true;
  for (const auto& r : cov) ok = ok && r.pass;
  b.add_check("coverage", ok, "coverage >= 1 - delta - 3 sqrt(delta/N) at every t");
  return b;
}

ReportBundle simulate_report(const ExperimentPreset& preset, const RunOptions& options) {
  const std::size_t T = options.horizon ? options.horizon : preset.horizon;
  const auto ens = run_ensemble(preset, ensemble_options(preset, options, T));
  const double delta = options.delta > 0.0 ? options.delta : preset.delta;
  Table dev({"t", "mean_deviation", "mean_sq_deviation", "max_deviation", "r_hat"});
  for (std::size_t t = 0; t <= T; ++t) {
    const auto d = ens.deviations_at(t);
    double s = 0.0, sq = 0.0, mx = 0.0;
    for (double v : d) {
      s += v;
      sq += v * v;
      mx = std::max(mx, v);
    }
    const double N = static_cast<double>(d.size());
    dev.add_row({num(t), num(s / N), num(sq / N), num(mx),
                 delta * N >= 1.0 ? num(empirical_quantile_radius(ens, delta, t)) : "nan"});
  }
  std::vector<std::string> cols{"trajectory", "t"};
  for (std::size_t i = 0; i < ens.dim; ++i) cols.push_back(time_column(i));
  cols.push_back("deviation");
  Table traj(cols);
  for (std::size_t i = 0; i < std::min<std::size_t>(ens.n_traj, 100); ++i)
    for (std::size_t t = 0; t <= T; ++t) {
      std::vector<std::string> row{num(i), num(t)};
      const Vector x = ens.state(i, t);
      for (Eigen::Index k = 0; k < x.size(); ++k) row.push_back(num(x(k)));
      row.push_back(num(ens.deviation(i, t)));
      traj.add_row(std::move(row));
    }
  ReportBundle b;
  b.add_csv("deviations.csv", dev);
  b.add_csv("trajectories.csv", traj);
  return b;
}

ReportBundle amgf_report(const RunOptions& options) {
  AmgfSuiteOptions so;
  so.seed = options.seed + 11;
  if (options.samples) so.mc_samples = options.samples;
  const auto res = amgf_lemma_suite(so);
  ReportBundle b;
  b.add_json("amgf_check.json", res.report);
  b.add_check("series_vs_quadrature", res.series_vs_quadrature <= so.series_tolerance,
              fmt::format("max rel error {:.3g}", res.series_vs_quadrature));
  b.add_check("closed_forms", res.closed_form <= so.closed_form_tolerance,
              fmt::format("max rel error {:.3g}", res.closed_form));
  b.add_check("decoupling", res.decoupling_failures == 0, fmt::format("{} failures", res.decoupling_failures));
  b.add_check("norm_concentration", res.concentration_failures == 0,
              fmt::format("{} failures", res.concentration_failures));
  return b;
}

ReportBundle reproduce_experiment(const std::string& name, const RunOptions& options) {
  if (name == "linear") return linear_experiment(options);
  if (name == "cobweb") return cobweb_experiment(options);
  if (name == "uav") return uav_experiment(options);
  throw ConfigError("unknown experiment '" + name + "' (expected linear, cobweb or uav)");
}

std::vector<Vector> boundary_cloud(const ProbabilisticReachSet& prs, const std::vector<std::size_t>& dims,
                                   std::size_t count) {
  require(dims.size() == 2 || dims.size() == 3, "boundary_cloud projects onto 2 or 3 coordinates");
  require(count >= 4, "boundary_cloud needs at least 4 points");
  const std::size_t n = set_dim(prs.base);
  for (std::size_t d : dims) require(d < n, "projection coordinate out of range");

  std::vector<Vector> dirs;
  for (std::size_t k = 0; k < count; ++k) {
    Vector d = Vector::Zero(static_cast<Eigen::Index>(n));
    if (dims.size() == 2) {
      const double a = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count);
      d(static_cast<Eigen::Index>(dims[0])) = std::cos(a);
      d(static_cast<Eigen::Index>(dims[1])) = std::sin(a);
    } else {
      // Fibonacci sphere
      const double z = 1.0 - 2.0 * (static_cast<double>(k) + 0.5) / static_cast<double>(count);
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double a = std::numbers::pi * (3.0 - std::sqrt(5.0)) * static_cast<double>(k);
      d(static_cast<Eigen::Index>(dims[0])) = rho * std::cos(a);
      d(static_cast<Eigen::Index>(dims[1])) = rho * std::sin(a);
      d(static_cast<Eigen::Index>(dims[2])) = z;
    }
    dirs.push_back(std::move(d));
  }

  std::vector<Vector> out;
  for (const auto& d : dirs) {
    Vector x;
    if (const auto* ball = std::get_if<BallSet>(&prs.base)) {
      // Support point of {x : ‖T(x − c)‖ ≤ R + r}: c + ρ P⁻¹d / sqrt(dᵀP⁻¹d).
      const Matrix& Ti = ball->norm().inverse_transform();
      const Vector pd = Ti * (Ti * d);
      const double scale = std::sqrt(std::max(d.dot(pd), 0.0));
      x = ball->center() + (ball->radius() + prs.inflation) * pd / scale;
    } else {
      const auto& box = std::get<IntervalBox>(prs.base);
      x = box.center();
      for (Eigen::Index i = 0; i < x.size(); ++i)
        if (d(i) > 0.0) x(i) = box.upper()(i);
        else if (d(i) < 0.0) x(i) = box.lower()(i);
      x += prs.inflation * d;
    }
    Vector p(static_cast<Eigen::Index>(dims.size()));
    for (std::size_t k = 0; k < dims.size(); ++k) p(static_cast<Eigen::Index>(k)) = x(static_cast<Eigen::Index>(dims[k]));
    out.push_back(std::move(p));
  }
  return out;
}

double r_squared(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, "r_squared needs matching samples (at least 2)");
  const double m = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  require(sxx > 0.0, "r_squared: x has no spread");
  if (syy == 0.0) return 1.0;
  return sxy * sxy / (sxx * syy);
}

}  // namespace probreach
