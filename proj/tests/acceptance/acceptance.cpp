// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance <cli-path> [criterion...]
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>
#include <unistd.h>

#include "probreach/amgf.hpp"
#include "probreach/drs.hpp"
#include "probreach/experiments.hpp"
#include "probreach/interval.hpp"
#include "probreach/montecarlo.hpp"
#include "probreach/uav.hpp"

using namespace probreach;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string cli_path;

// 1. Bound validity on the linear preset.
Outcome bound_validity() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto preset = linear_preset(2);
  const auto tube = compute_reach_tube(preset);
  EnsembleOptions opt;
  opt.n_traj = 5000;
  opt.seed = 1;
  opt.keep_states = false;
  const auto ens = run_ensemble(preset, opt);
  std::size_t violations = 0;
  double worst_ratio = 0.0;
  for (std::size_t t = 1; t <= preset.horizon; ++t)
    for (std::size_t i = 0; i < ens.n_traj; ++i) {
      const double d = ens.deviation(i, t);
      violations += d > tube.r_delta[t] ? 1 : 0;
      worst_ratio = std::max(worst_ratio, d / tube.r_delta[t]);
    }
  const double elapsed = seconds_since(t0);
  return {violations == 0 && elapsed < 10.0,
          fmt::format("5000 trajectories, T=15: {} violations, max deviation/r = {:.4f}, {:.2f} s", violations,
                      worst_ratio, elapsed)};
}

// 2. amgf_bound on constant schedules equals the closed-form linear bound.
Outcome linear_exactness() {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ul(0.1, 1.5), us(0.01, 2.0), ud(-8.0, -0.05), ue(0.01, 0.9);
  std::uniform_int_distribution<int> ut(1, 60), un(1, 12);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double L = ul(rng), sigma = us(rng), delta = std::pow(10.0, ud(rng));
    const auto t = static_cast<std::size_t>(ut(rng));
    const auto n = static_cast<std::size_t>(un(rng));
    const auto eps = epsilon_constants(ue(rng));
    const double r = amgf_bound(constant_schedule(L, sigma * sigma, t), n, delta, eps, t);
    const double lin = linear_exact_bound(L, std::vector<double>(t, sigma * sigma), n, delta, eps, t);
    // σ²(L^{2t} − 1)/(L² − 1), with expm1 so that L near 1 keeps full precision
    const double lg = std::log(L);
    const double psi = sigma * sigma * std::expm1(2.0 * t * lg) / std::expm1(2.0 * lg);
    const double closed = std::sqrt(psi * (eps.eps1 * n + eps.eps2 * std::log(1.0 / delta)));
    worst = std::max({worst, std::abs(r - closed) / closed, std::abs(lin - r) / r});
  }
  return {worst <= 1e-12, fmt::format("100 tuples, worst relative difference {:.3e}", worst)};
}

// 3. Worst-case bound dominates; at L = 1 the scaling factors differ by √t.
Outcome dominance() {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ul(0.05, 1.6), us(0.0, 2.0), ud(-10.0, -0.01), ue(0.01, 0.9);
  std::uniform_int_distribution<int> ut(1, 60), un(1, 20);
  std::size_t failures = 0;
  for (int k = 0; k < 10000; ++k) {
    const auto T = static_cast<std::size_t>(ut(rng));
    std::vector<double> L(T), s2(T);
    for (std::size_t i = 0; i < T; ++i) {
      L[i] = ul(rng);
      s2[i] = us(rng);
    }
    const auto sch = build_schedule(L, s2, T);
    const double delta = std::pow(10.0, ud(rng));
    const auto n = static_cast<std::size_t>(un(rng));
    const auto eps = epsilon_constants(ue(rng));
    if (!(worstcase_bound(sch, n, delta, eps, T) >= amgf_bound(sch, n, delta, eps, T))) ++failures;
  }
  double worst_ratio_err = 0.0;
  for (double sigma : {0.1, 0.7, 3.0}) {
    const auto sch = constant_schedule(1.0, sigma * sigma, 200);
    for (std::size_t t = 1; t <= 200; ++t) {
      const double ratio = sch.worst[t] / std::sqrt(sch.Psi[t]);
      worst_ratio_err = std::max(worst_ratio_err, std::abs(ratio - std::sqrt(double(t))) / std::sqrt(double(t)));
    }
  }
  return {failures == 0 && worst_ratio_err <= 1e-9,
          fmt::format("10^4 tuples: {} dominance failures; L=1 scaling ratio vs sqrt(t): worst rel err {:.2e}",
                      failures, worst_ratio_err)};
}

std::vector<double> deviations_at_25(std::size_t n, std::uint64_t seed) {
  EnsembleOptions opt;
  opt.n_traj = 1000000;
  opt.seed = seed;
  opt.keep_states = false;
  opt.horizon = 25;
  opt.record_times = {25};
  const auto ens = run_ensemble(linear_preset(n), opt);
  return ens.deviations;
}

double quantile(std::vector<double> v, double delta) {
  const auto k = static_cast<std::size_t>(std::ceil(delta * static_cast<double>(v.size()) - 1e-9));
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k - 1), v.end(), std::greater<>());
  return v[k - 1];
}

// 4. Scaling law of the empirical quantile radius at t = 25.
Outcome scaling_law() {
  const auto d2 = deviations_at_25(2, 4);
  std::vector<double> x, y;
  for (double delta : {1e-1, 3e-2, 1e-2}) {
    const double r = quantile(d2, delta);
    x.push_back(std::log(1.0 / delta));
    y.push_back(r * r);
  }
  const double r2_delta = r_squared(x, y);
  std::vector<double> xn, yn;
  for (std::size_t n : {2u, 4u, 8u}) {
    const double r = quantile(n == 2 ? d2 : deviations_at_25(n, 4 + n), 1e-2);
    xn.push_back(double(n));
    yn.push_back(r * r);
  }
  const double r2_n = r_squared(xn, yn);
  return {r2_delta >= 0.95 && r2_n >= 0.95,
          fmt::format("10^6 trajectories: R^2 vs log(1/delta) = {:.5f}, R^2 vs n = {:.5f}", r2_delta, r2_n)};
}

// 5. Mean squared deviation against nΨ_t, strictly.
Outcome expectation_bound_check() {
  const auto preset = linear_preset(2);
  const auto sch = constant_schedule(0.93, 0.2, preset.horizon);
  EnsembleOptions opt;
  opt.n_traj = 100000;
  opt.seed = 5;
  opt.keep_states = false;
  const auto ens = run_ensemble(preset, opt);
  double min_slack = INFINITY, min_z = INFINITY;
  std::size_t above = 0, worst_t = 0;
  for (std::size_t t = 1; t <= preset.horizon; ++t) {
    double sum = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < ens.n_traj; ++i) {
      const double d2 = ens.deviation(i, t) * ens.deviation(i, t);
      sum += d2;
      sq += d2 * d2;
    }
    const double N = double(ens.n_traj), mean = sum / N;
    const double se = std::sqrt(std::max(0.0, sq / N - mean * mean) / N);
    const double bound = expectation_bound(sch, 2, t);
    const double slack = bound - mean;
    if (slack < min_slack) {
      min_slack = slack;
      worst_t = t;
    }
    min_z = std::min(min_z, slack / se);
    above += slack < 0.0 ? 1 : 0;
  }
  return {above == 0, fmt::format("10^5 samples: mean > n*Psi at {}/15 times; min slack {:.5f} at t={} ({:.2f} SE)",
                                  above, min_slack, worst_t, min_z)};
}

// 6. AMGF lemma suite.
Outcome amgf_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = amgf_lemma_suite();
  const double elapsed = seconds_since(t0);
  return {r.pass && elapsed < 60.0,
          fmt::format("series/quadrature {:.2e}, closed forms {:.2e}, decoupling failures {}, concentration "
                      "failures {}, {:.2f} s",
                      r.series_vs_quadrature, r.closed_form, r.decoupling_failures, r.concentration_failures,
                      elapsed)};
}

std::size_t outside_count(const std::vector<CoverageRow>& rows, const std::vector<std::size_t>& times) {
  std::size_t out = 0;
  for (const auto& row : rows)
    if (std::find(times.begin(), times.end(), row.t) != times.end()) out += row.total - row.inside;
  return out;
}

// 7. Cobweb δ-PRS coverage and DRS soundness.
Outcome cobweb_reproduction() {
  const auto preset = cobweb_preset();
  EnsembleOptions opt;
  opt.n_traj = 2000;
  opt.seed = 7;
  const auto ens = run_ensemble(preset, opt);
  std::vector<std::string> parts;
  bool pass = true;
  for (auto backend : {DrsBackend::lipschitz, DrsBackend::interval}) {
    TubeOptions to;
    to.backend = backend;
    const auto tube = compute_reach_tube(preset, to);
    const auto outside = outside_count(coverage_check(tube.prs, ens), {1, 2, 3, 5});
    const auto sound = check_drs_soundness(preset, tube, 1000, 77);
    pass = pass && outside == 0 && sound.violations == 0;
    parts.push_back(fmt::format("{}: {} PRS violations, {} DRS violations, r_delta(5) = {:.5f}",
                                backend_name(backend), outside, sound.violations, tube.r_delta[5]));
  }
  return {pass, fmt::format("2000 trajectories; {}; {}", parts[0], parts[1])};
}

Interval random_nested(std::mt19937_64& rng, const Interval& outer) {
  std::uniform_real_distribution<double> u(outer.lo(), outer.hi());
  double a = u(rng), b = u(rng);
  if (a > b) std::swap(a, b);
  return Interval(a, b);
}

// 8. Interval backend soundness plus primitive isotonicity.
Outcome interval_soundness() {
  const auto preset = cobweb_preset();
  const auto inc = natural_inclusion(preset.model);
  const auto boxes = interval_reach(inc, std::get<IntervalBox>(preset.initial_set), IntervalBox(Vector(0), Vector(0)),
                                    preset.horizon);
  Rng rng(8);
  std::size_t escapes = 0;
  for (int k = 0; k < 1000; ++k) {
    Vector x = sample_uniform(preset.initial_set, rng);
    for (std::size_t t = 0; t <= preset.horizon; ++t) {
      if (!boxes[t].contains(x)) ++escapes;
      x = preset.model.step(x, Vector(0), t);
    }
  }

  std::mt19937_64 gen(88);
  std::uniform_real_distribution<double> u(-4.0, 4.0), up(0.01, 5.0), ut(-1.5, 1.5);
  auto draw = [&](auto& dist) {
    double a = dist(gen), b = dist(gen);
    if (a > b) std::swap(a, b);
    return Interval(a, b);
  };
  auto inner = [&](const Interval& x) { return random_nested(gen, x); };
  std::size_t iso_failures = 0;
  for (int k = 0; k < 10000; ++k) {
    const Interval a = draw(u), b = draw(u), ai = inner(a), bi = inner(b);
    const Interval p = draw(up), pi = inner(p), q = draw(ut), qi = inner(q);
    const bool ok = (ai + bi).subset_of(a + b) && (ai - bi).subset_of(a - b) && (ai * bi).subset_of(a * b) &&
                    (-ai).subset_of(-a) && sqr(ai).subset_of(sqr(a)) && pow(ai, 3.0).subset_of(pow(a, 3.0)) &&
                    pow(pi, 0.5).subset_of(pow(p, 0.5)) && pow(pi, -1.0).subset_of(pow(p, -1.0)) &&
                    log1p(pi).subset_of(log1p(p)) && sin(ai).subset_of(sin(a)) && cos(ai).subset_of(cos(a)) &&
                    tan(qi).subset_of(tan(q)) && min(ai, bi).subset_of(min(a, b)) &&
                    max(ai, bi).subset_of(max(a, b));
    iso_failures += ok ? 0 : 1;
  }
  return {escapes == 0 && iso_failures == 0,
          fmt::format("1000 deterministic trajectories: {} box escapes over t<=5; isotonicity failures {}/10000",
                      escapes, iso_failures)};
}

// 9. UAV convergence and δ-PRS coverage.
Outcome uav_property() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto preset = uav_preset();
  const uav::Line line;
  const uav::GuidanceGains gains;
  const uav::Airframe af;
  Vector x = set_center(preset.initial_set);
  std::vector<double> ct, alt;
  for (std::size_t t = 0; t <= preset.horizon; ++t) {
    ct.push_back(std::abs(uav::cross_track_error(x, line)));
    alt.push_back(std::abs(uav::altitude_error(x, line)));
    x = uav::closed_loop_step(x, Vector::Zero(3), af, line, gains);
  }
  std::size_t non_decreasing = 0;
  for (std::size_t t = 51; t <= preset.horizon; ++t)
    if (!(ct[t] + alt[t] < ct[t - 1] + alt[t - 1])) ++non_decreasing;

  const auto tube = compute_reach_tube(preset);
  EnsembleOptions opt;
  opt.n_traj = 2000;
  opt.seed = 9;
  const auto ens = run_ensemble(preset, opt);
  std::size_t outside = 0;
  for (const auto& row : coverage_check(tube.prs, ens)) outside += row.total - row.inside;
  const double elapsed = seconds_since(t0);
  return {non_decreasing == 0 && outside == 0 && elapsed < 300.0,
          fmt::format("error sum non-decreasing steps after t=50: {}; final errors ({:.2e}, {:.2e}); "
                      "{} PRS violations over 2000 trajectories x 201 times; r_delta(200) = {:.4f}; {:.1f} s",
                      non_decreasing, ct.back(), alt.back(), outside, tube.r_delta.back(), elapsed)};
}

std::map<std::string, std::string> read_tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    files[fs::relative(entry.path(), root).string()] = s.str();
  }
  return files;
}

// 10. Byte-identical output trees from two CLI runs.
Outcome determinism() {
  if (cli_path.empty()) return {false, "no CLI path given"};
  const fs::path base = fs::temp_directory_path() / ("probreach_accept_" + std::to_string(::getpid()));
  fs::remove_all(base);
  const fs::path a = base / "run_a", b = base / "run_b";
  for (const auto& dir : {a, b}) {
    const std::string cmd = fmt::format("\"{}\" experiment linear --seed 7 --out \"{}\" > /dev/null", cli_path,
                                        dir.string());
    if (std::system(cmd.c_str()) != 0) {
      fs::remove_all(base);
      return {false, "CLI run failed: " + cmd};
    }
  }
  const auto ta = read_tree(a), tb = read_tree(b);
  fs::remove_all(base);
  const bool has_layout = ta.count("bounds.csv") && ta.count("quantiles.csv") && ta.count("coverage.csv") &&
                          ta.count("manifest.json");
  return {ta == tb && has_layout && !ta.empty(),
          fmt::format("{} files per tree, trees {}", ta.size(), ta == tb ? "identical" : "differ")};
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"bound validity (linear preset)", bound_validity},
      {"linear exactness", linear_exactness},
      {"dominance of the worst-case bound", dominance},
      {"scaling law", scaling_law},
      {"expectation bound", expectation_bound_check},
      {"AMGF lemma suite", amgf_suite},
      {"cobweb reproduction", cobweb_reproduction},
      {"interval backend soundness", interval_soundness},
      {"UAV convergence and coverage", uav_property},
      {"determinism", determinism},
  };
  std::vector<std::size_t> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (!arg.empty() && std::all_of(arg.begin(), arg.end(), ::isdigit)) {
      const auto k = std::stoul(arg);
      if (k < 1 || k > criteria.size()) {
        std::cerr << "no criterion " << k << "\n";
        return 2;
      }
      selected.push_back(k);
    } else {
      cli_path = arg;
    }
  }
  if (selected.empty())
    for (std::size_t k = 1; k <= criteria.size(); ++k) selected.push_back(k);

  bool all = true;
  for (auto k : selected) {
    Outcome out;
    try {
      out = criteria[k - 1].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    all = all && out.pass;
    std::cout << (out.pass ? "PASS" : "FAIL") << " criterion " << k << " (" << criteria[k - 1].first
              << "): " << out.detail << std::endl;
  }
  return all ? 0 : 1;
}
