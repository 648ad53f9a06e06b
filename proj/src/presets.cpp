#include "probreach/presets.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "probreach/montecarlo.hpp"

namespace probreach {
namespace {

using nlohmann::json;

Vector to_vector(const json& j, const char* what) {
  if (!j.is_array()) throw ConfigError(std::string(what) + " must be an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(std::string(what) + " must be an array of numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

Matrix to_matrix(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw ConfigError(std::string(what) + " must be a non-empty array of rows");
  const std::size_t cols = j[0].size();
  Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const Vector row = to_vector(j[r], what);
    if (static_cast<std::size_t>(row.size()) != cols) throw ConfigError(std::string(what) + " rows differ in length");
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return m;
}

json to_json(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

}  // namespace

const char* input_policy_name(InputPolicy policy) {
  return policy == InputPolicy::nominal ? "nominal" : "uniform";
}

ExperimentPreset linear_preset(std::size_t n) {
  require(n >= 1, "linear preset needs n >= 1");
  constexpr double a = -0.93, var = 0.2;
  std::vector<Expr> dyn;
  for (std::size_t i = 0; i < n; ++i) dyn.push_back(Expr(a) * Expr::state(i));
  auto model = SystemModel::from_expressions("linear", std::move(dyn), 0, [](std::size_t) { return std::abs(a); },
                                             IntervalBox(Vector(0), Vector(0)));
  json params = {{"A_diagonal", a}, {"noise_variance", var}, {"x0", std::vector<double>(n, 0.0)},
                 {"dim", n},        {"horizon", 15},         {"delta", 1e-3},
                 {"epsilon", 1.0 / 16.0}};
  return ExperimentPreset{
      .name = n == 2 ? "linear" : "linear" + std::to_string(n),
      .model = std::move(model),
      .noise = NoiseSpec::isotropic_gaussian(n, std::sqrt(var)),
      .initial_set = IntervalBox::point(Vector::Zero(static_cast<Eigen::Index>(n))),
      .input_policy = InputPolicy::nominal,
      .horizon = 15,
      .delta = 1e-3,
      .epsilon = 1.0 / 16.0,
      .norm = NormSpec(n),
      .input_norm = NormSpec(std::size_t{0}),
      .input_lipschitz = 0.0,
      .local_lipschitz = nullptr,
      .trajectories = 5000,
      .parameters = std::move(params),
  };
}

ExperimentPreset cobweb_preset() {
  constexpr double a = 10.0, b = 1.5, c = 0.5, d = 1.0, var = 1e-5, cap = 0.05;
  const Expr q = Expr::state(1);
  std::vector<Expr> dyn{Expr(a) - Expr(b) * log1p(q), Expr(c * a - d) - Expr(c * b) * log1p(q)};
  const double slope = b * std::sqrt(1.0 + c * c);
  // Global constant valid for q ≥ 0; the experiment localizes it.
  auto model = SystemModel::from_expressions("cobweb", std::move(dyn), 0, [=](std::size_t) { return slope; },
                                             IntervalBox(Vector(0), Vector(0)));
  Matrix mixing(2, 2);
  mixing << 1.0, 0.0, c, 1.0;
  auto noise = NoiseSpec::truncated_gaussian(
      Vector::Constant(2, std::sqrt(var)), [=](std::size_t, const Vector& cand) { return Vector(cap * cand); },
      mixing);
  Vector lo(2), hi(2);
  lo << 9.195, 3.595;
  hi << 9.205, 3.605;
  json params = {{"a", a},
                 {"b", b},
                 {"c", c},
                 {"d", d},
                 {"noise_variance", var},
                 {"truncation_fraction", cap},
                 {"initial_lower", to_json(lo)},
                 {"initial_upper", to_json(hi)},
                 {"x0_nominal", {9.2, 3.6}},
                 {"r1", 5.0 * std::sqrt(2.0) * 1e-3},
                 {"horizon", 5},
                 {"delta", 1e-3},
                 {"epsilon", 1.0 / 32.0},
                 {"trajectories", 2000}};
  // L over a convex region is b√(1+c²)/(1 + q_min).
  LocalLipschitzFn local = [=](const BallSet& region, std::size_t t) {
    const double q_min = region.center()(1) - set_radius(ReachSet(region), NormSpec(2));
    if (!(q_min > -1.0))
      throw DomainError("cobweb Lipschitz region reaches q <= -1 at step " + std::to_string(t));
    return slope / (1.0 + q_min);
  };
  return ExperimentPreset{
      .name = "cobweb",
      .model = std::move(model),
      .noise = std::move(noise),
      .initial_set = IntervalBox(lo, hi),
      .input_policy = InputPolicy::nominal,
      .horizon = 5,
      .delta = 1e-3,
      .epsilon = 1.0 / 32.0,
      .norm = NormSpec(std::size_t{2}),
      .input_norm = NormSpec(std::size_t{0}),
      .input_lipschitz = 0.0,
      .local_lipschitz = std::move(local),
      .trajectories = 2000,
      .parameters = std::move(params),
  };
}

ExperimentPreset uav_preset(const UavOptions& opt) {
  require(opt.airframe.airspeed > 0.0, "airspeed must be positive");
  const double eta = opt.airframe.step;
  StepFn step = [af = opt.airframe, line = opt.line, gains = opt.gains](const Vector& x, const Vector& u,
                                                                          std::size_t) {
    return uav::closed_loop_step(x, u, af, line, gains);
  };
  ReachSet wind = IntervalBox(Vector::Constant(3, -0.5), Vector::Constant(3, 0.5));
  SystemModel model("uav", 4, 3, std::move(step), [](std::size_t) -> double {
    throw ConfigError("uav preset uses localized Lipschitz constants only");
  }, wind);
  Vector pw(4);
  pw << 1.0, 1.0, 100.0, 50.0;
  const NormSpec norm = NormSpec::diagonal(pw);
  const NormSpec input_norm = NormSpec::diagonal(pw.head(3));
  Vector sd(4);
  sd << 1.0, 1.0, 1.0, std::sqrt(0.1);
  auto noise = NoiseSpec::gaussian(std::sqrt(eta) * 0.1 * sd);
  Vector x0(4);
  x0 << 5.0, 4.5, 0.0, 5.0 * std::numbers::pi / 18.0;
  const double rho = induced_norm(uav::wind_jacobian(opt.airframe), norm, input_norm);

  LipschitzEstimateOptions lo;
  lo.inflation = opt.lipschitz_inflation;
  lo.seed = opt.lipschitz_seed;
  LocalLipschitzFn local = [model, pairs = opt.lipschitz_pairs, lo](const BallSet& region, std::size_t t) {
    return estimate_local_lipschitz(model, region, pairs, t, lo);
  };
  json params = {{"airspeed", opt.airframe.airspeed},
                 {"gravity", opt.airframe.gravity},
                 {"eta", eta},
                 {"noise_scale", 0.1},
                 {"noise_covariance_diagonal", {1.0, 1.0, 1.0, 0.1}},
                 {"wind_bound", 0.5},
                 {"x0", to_json(x0)},
                 {"line_origin", to_json(opt.line.origin)},
                 {"line_direction", to_json(opt.line.direction)},
                 {"P_diagonal", to_json(pw)},
                 {"horizon", 200},
                 {"delta", 1e-4},
                 {"epsilon", 1.0 / 16.0},
                 {"trajectories", 2000},
                 {"gains",
                  {{"k_path", opt.gains.k_path},
                   {"chi_inf", opt.gains.chi_inf},
                   {"k_course", opt.gains.k_course},
                   {"k_altitude", opt.gains.k_altitude},
                   {"roll_limit", opt.gains.roll_limit},
                   {"gamma_limit", opt.gains.gamma_limit}}},
                 {"lipschitz_pairs", opt.lipschitz_pairs},
                 {"lipschitz_inflation", opt.lipschitz_inflation}};
  return ExperimentPreset{
      .name = "uav",
      .model = std::move(model),
      .noise = std::move(noise),
      .initial_set = IntervalBox::point(x0),
      .input_policy = InputPolicy::uniform,
      .horizon = 200,
      .delta = 1e-4,
      .epsilon = 1.0 / 16.0,
      .norm = norm,
      .input_norm = input_norm,
      .input_lipschitz = rho,
      .local_lipschitz = std::move(local),
      .trajectories = 2000,
      .parameters = std::move(params),
  };
}

std::vector<std::string> preset_names() { return {"linear", "cobweb", "uav"}; }

ExperimentPreset make_preset(const std::string& name) {
  if (name == "linear") return linear_preset(2);
  if (name.starts_with("linear")) {
    const std::string digits = name.substr(6);
    if (!digits.empty() && digits.find_first_not_of("0123456789") == std::string::npos && digits.size() < 5) {
      const auto n = std::stoul(digits);
      if (n >= 1) return linear_preset(n);
    }
  }
  if (name == "cobweb") return cobweb_preset();
  if (name == "uav") return uav_preset();
  throw ConfigError("unknown preset '" + name + "' (expected linear, linear<n>, cobweb or uav)");
}

ExperimentPreset load_custom_system(const json& spec) {
  try {
    if (!spec.is_object()) throw ConfigError("system spec must be a JSON object");
    const auto n = spec.at("dim_state").get<std::size_t>();
    const auto p = spec.value("dim_input", std::size_t{0});
    if (n == 0) throw ConfigError("dim_state must be positive");

    std::map<std::string, double> params;
    if (spec.contains("parameters")) {
      for (const auto& [k, v] : spec.at("parameters").items()) {
        if (!v.is_number()) throw ConfigError("parameter '" + k + "' must be a number");
        params[k] = v.get<double>();
      }
    }
    const auto& dyn_j = spec.at("dynamics");
    if (!dyn_j.is_array() || dyn_j.size() != n) throw ConfigError("dynamics must list one expression per state");
    std::vector<Expr> dyn;
    for (const auto& e : dyn_j) {
      dyn.push_back(Expr::from_json(e, params));
      if (dyn.back().state_arity() > n || dyn.back().input_arity() > p)
        throw ConfigError("dynamics reference a state or input index out of range");
    }

    ReachSet input_set = IntervalBox(Vector::Zero(static_cast<Eigen::Index>(p)), Vector::Zero(static_cast<Eigen::Index>(p)));
    if (spec.contains("input_set")) {
      const auto& is = spec.at("input_set");
      input_set = IntervalBox(to_vector(is.at("lower"), "input_set.lower"), to_vector(is.at("upper"), "input_set.upper"));
      if (set_dim(input_set) != p) throw ConfigError("input_set dimension differs from dim_input");
    } else if (p > 0) {
      throw ConfigError("dim_input > 0 requires an input_set");
    }

    const auto& lj = spec.at("lipschitz");
    LipschitzFn lip;
    if (lj.is_number()) {
      const double L = lj.get<double>();
      lip = [L](std::size_t) { return L; };
    } else {
      const Vector ls = to_vector(lj, "lipschitz");
      std::vector<double> v(ls.data(), ls.data() + ls.size());
      lip = [v](std::size_t t) {
        if (t >= v.size()) throw ConfigError("lipschitz sequence shorter than the horizon");
        return v[t];
      };
    }
    auto model = SystemModel::from_expressions(spec.value("name", std::string("custom")), std::move(dyn), p,
                                               std::move(lip), input_set);

    const auto& nj = spec.at("noise");
    const std::string kind = nj.at("kind").get<std::string>();
    Vector scales = nj.contains("scales") ? to_vector(nj.at("scales"), "noise.scales")
                                          : Vector::Constant(static_cast<Eigen::Index>(n), nj.value("sd", 0.0));
    std::optional<Matrix> mixing;
    if (nj.contains("mixing")) mixing = to_matrix(nj.at("mixing"), "noise.mixing");
    std::optional<NoiseSpec> noise;
    if (kind == "gaussian") {
      noise = NoiseSpec::gaussian(scales, mixing);
    } else if (kind == "uniform_box") {
      noise = NoiseSpec::uniform_box(scales, mixing);
    } else if (kind == "truncated_gaussian") {
      const Vector frac = to_vector(nj.at("cap_fraction"), "noise.cap_fraction");
      noise = NoiseSpec::truncated_gaussian(
          scales, [frac](std::size_t, const Vector& cand) { return Vector(frac.cwiseProduct(cand)); }, mixing);
    } else {
      throw ConfigError("unknown noise kind '" + kind + "'");
    }
    if (noise->dim() != n) throw ConfigError("noise dimension differs from dim_state");
    if (nj.contains("sigma")) {
      const double s = nj.at("sigma").get<double>();
      if (!(s >= 0.0)) throw ConfigError("noise.sigma must be non-negative");
      noise = noise->with_variance_proxy([s](std::size_t) { return s * s; });
    }

    const auto& ij = spec.at("initial_set");
    ReachSet initial = IntervalBox::point(Vector::Zero(static_cast<Eigen::Index>(n)));
    if (ij.contains("lower")) {
      initial = IntervalBox(to_vector(ij.at("lower"), "initial_set.lower"), to_vector(ij.at("upper"), "initial_set.upper"));
    } else {
      initial = BallSet(to_vector(ij.at("center"), "initial_set.center"), ij.at("radius").get<double>());
    }
    if (set_dim(initial) != n) throw ConfigError("initial_set dimension differs from dim_state");

    NormSpec norm(n);
    if (spec.contains("norm_weights")) norm = NormSpec::diagonal(to_vector(spec.at("norm_weights"), "norm_weights"));
    if (norm.dim() != n) throw ConfigError("norm_weights dimension differs from dim_state");

    const std::string policy = spec.value("input_policy", std::string("nominal"));
    if (policy != "nominal" && policy != "uniform") throw ConfigError("input_policy must be nominal or uniform");

    ExperimentPreset out{
        .name = model.name(),
        .model = std::move(model),
        .noise = std::move(*noise),
        .initial_set = std::move(initial),
        .input_policy = policy == "uniform" ? InputPolicy::uniform : InputPolicy::nominal,
        .horizon = spec.value("horizon", std::size_t{10}),
        .delta = spec.value("delta", 1e-3),
        .epsilon = spec.value("epsilon", 1.0 / 16.0),
        .norm = norm,
        .input_norm = NormSpec(p),
        .input_lipschitz = spec.value("input_lipschitz", 0.0),
        .local_lipschitz = nullptr,
        .trajectories = spec.value("trajectories", std::size_t{1000}),
        .parameters = spec,
    };
    if (out.horizon == 0) throw ConfigError("horizon must be positive");
    if (!(out.delta > 0.0 && out.delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
    if (!(out.epsilon > 0.0 && out.epsilon < 1.0)) throw ConfigError("epsilon must lie in (0, 1)");
    if (!(out.input_lipschitz >= 0.0)) throw ConfigError("input_lipschitz must be non-negative");
    return out;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed system spec: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid system spec: ") + e.what());
  }
}

ExperimentPreset load_custom_system_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open system spec '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse system spec '" + path + "': " + e.what());
  }
  return load_custom_system(j);
}

}  // namespace probreach
