#include "probreach/expr.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace probreach {
namespace {

struct OpInfo {
  Op op;
  const char* name;
  int arity;
};

constexpr OpInfo kOps[] = {
    {Op::constant, "const", 0}, {Op::state, "x", 0},    {Op::input, "u", 0},     {Op::add, "add", 2},
    {Op::sub, "sub", 2},        {Op::mul, "mul", 2},    {Op::neg, "neg", 1},     {Op::pow, "pow", 1},
    {Op::log1p, "log1p", 1},    {Op::sin, "sin", 1},    {Op::cos, "cos", 1},     {Op::tan, "tan", 1},
    {Op::min, "min", 2},        {Op::max, "max", 2},
};

const OpInfo& info(Op op) {
  for (const auto& i : kOps)
    if (i.op == op) return i;
  throw std::logic_error("unknown op");
}

double pow_scalar(double x, double p) { return p == 2.0 ? x * x : std::pow(x, p); }
Interval pow_scalar(const Interval& x, double p) { return pow(x, p); }
double min_of(double a, double b) { return std::min(a, b); }
double max_of(double a, double b) { return std::max(a, b); }
Interval min_of(const Interval& a, const Interval& b) { return min(a, b); }
Interval max_of(const Interval& a, const Interval& b) { return max(a, b); }

}  // namespace

const char* op_name(Op op) { return info(op).name; }

Expr::Expr(double value) : node_(std::make_shared<const Node>(Node{Op::constant, value, 0, {}})) {}

Expr Expr::state(std::size_t index) { return Expr(std::make_shared<const Node>(Node{Op::state, 0.0, index, {}})); }
Expr Expr::input(std::size_t index) { return Expr(std::make_shared<const Node>(Node{Op::input, 0.0, index, {}})); }

Expr Expr::unary(Op op, Expr arg) {
  if (info(op).arity != 1 || op == Op::pow) throw std::invalid_argument(std::string("not a unary op: ") + op_name(op));
  return Expr(std::make_shared<const Node>(Node{op, 0.0, 0, {std::move(arg)}}));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
  if (info(op).arity != 2) throw std::invalid_argument(std::string("not a binary op: ") + op_name(op));
  return Expr(std::make_shared<const Node>(Node{op, 0.0, 0, {std::move(lhs), std::move(rhs)}}));
}

Expr Expr::power(Expr base, double exponent) {
  require(std::isfinite(exponent), "pow: exponent must be finite");
  return Expr(std::make_shared<const Node>(Node{Op::pow, exponent, 0, {std::move(base)}}));
}

std::size_t Expr::state_arity() const {
  std::size_t n = op() == Op::state ? index() + 1 : 0;
  for (const auto& a : args()) n = std::max(n, a.state_arity());
  return n;
}

std::size_t Expr::input_arity() const {
  std::size_t n = op() == Op::input ? index() + 1 : 0;
  for (const auto& a : args()) n = std::max(n, a.input_arity());
  return n;
}

template <class T>
T Expr::evaluate(std::span<const T> x, std::span<const T> u) const {
  using std::cos;
  using std::log1p;
  using std::sin;
  using std::tan;
  const auto& a = args();
  switch (op()) {
    case Op::constant:
      return T(value());
    case Op::state:
      if (index() >= x.size()) throw std::out_of_range("expression references x" + std::to_string(index()));
      return x[index()];
    case Op::input:
      if (index() >= u.size()) throw std::out_of_range("expression references u" + std::to_string(index()));
      return u[index()];
    case Op::add:
      return a[0].evaluate(x, u) + a[1].evaluate(x, u);
    case Op::sub:
      return a[0].evaluate(x, u) - a[1].evaluate(x, u);
    case Op::mul:
      return a[0].evaluate(x, u) * a[1].evaluate(x, u);
    case Op::neg:
      return -a[0].evaluate(x, u);
    case Op::pow:
      return pow_scalar(a[0].evaluate(x, u), value());
    case Op::log1p:
      return log1p(a[0].evaluate(x, u));
    case Op::sin:
      return sin(a[0].evaluate(x, u));
    case Op::cos:
      return cos(a[0].evaluate(x, u));
    case Op::tan:
      return tan(a[0].evaluate(x, u));
    case Op::min:
      return min_of(a[0].evaluate(x, u), a[1].evaluate(x, u));
    case Op::max:
      return max_of(a[0].evaluate(x, u), a[1].evaluate(x, u));
  }
  throw std::logic_error("unreachable");
}

double Expr::eval(std::span<const double> x, std::span<const double> u) const { return evaluate<double>(x, u); }

Interval Expr::eval(std::span<const Interval> x, std::span<const Interval> u) const {
  return evaluate<Interval>(x, u);
}

Expr Expr::from_json(const nlohmann::json& j, const std::map<std::string, double>& params) {
  if (j.is_number()) return Expr(j.get<double>());
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (auto it = params.find(name); it != params.end()) return Expr(it->second);
    auto parse_index = [&](std::size_t skip) -> std::optional<std::size_t> {
      if (name.size() <= skip) return std::nullopt;
      for (std::size_t k = skip; k < name.size(); ++k)
        if (name[k] < '0' || name[k] > '9') return std::nullopt;
      return std::stoul(name.substr(skip));
    };
    if (name[0] == 'x')
      if (auto i = parse_index(1)) return state(*i);
    if (name[0] == 'u')
      if (auto i = parse_index(1)) return input(*i);
    throw std::invalid_argument("unknown symbol '" + name + "' in expression");
  }
  if (!j.is_array() || j.empty() || !j[0].is_string())
    throw std::invalid_argument("expression must be a number, a symbol or [op, args...]: " + j.dump());
  const auto name = j[0].get<std::string>();
  const auto it = std::find_if(std::begin(kOps), std::end(kOps), [&](const OpInfo& i) { return name == i.name; });
  if (it == std::end(kOps) || it->arity == 0) throw std::invalid_argument("unknown primitive '" + name + "'");
  if (it->op == Op::pow) {
    if (j.size() != 3 || !j[2].is_number()) throw std::invalid_argument("pow expects [\"pow\", expr, exponent]");
    return power(from_json(j[1], params), j[2].get<double>());
  }
  if (j.size() != static_cast<std::size_t>(it->arity) + 1)
    throw std::invalid_argument("primitive '" + name + "' expects " + std::to_string(it->arity) + " argument(s)");
  if (it->arity == 1) return unary(it->op, from_json(j[1], params));
  return binary(it->op, from_json(j[1], params), from_json(j[2], params));
}

nlohmann::json Expr::to_json() const {
  switch (op()) {
    case Op::constant:
      return value();
    case Op::state:
      return "x" + std::to_string(index());
    case Op::input:
      return "u" + std::to_string(index());
    case Op::pow:
      return nlohmann::json::array({"pow", args()[0].to_json(), value()});
    default: {
      auto out = nlohmann::json::array({op_name(op())});
      for (const auto& a : args()) out.push_back(a.to_json());
      return out;
    }
  }
}

CompiledExpr::CompiledExpr(const Expr& expr) {
  emit(expr, 1);
  if (max_depth_ > 64) throw std::invalid_argument("expression nests too deeply to compile");
}

void CompiledExpr::emit(const Expr& e, std::size_t depth) {
  max_depth_ = std::max(max_depth_, depth);
  for (std::size_t k = 0; k < e.args().size(); ++k) emit(e.args()[k], depth + k);
  code_.push_back({e.op(), e.value(), e.index()});
}

double CompiledExpr::operator()(const double* x, const double* u) const {
  double stack[64];
  std::size_t sp = 0;
  for (const auto& in : code_) {
    switch (in.op) {
      case Op::constant: stack[sp++] = in.value; break;
      case Op::state: stack[sp++] = x[in.index]; break;
      case Op::input: stack[sp++] = u[in.index]; break;
      case Op::add: --sp; stack[sp - 1] = stack[sp - 1] + stack[sp]; break;
      case Op::sub: --sp; stack[sp - 1] = stack[sp - 1] - stack[sp]; break;
      case Op::mul: --sp; stack[sp - 1] = stack[sp - 1] * stack[sp]; break;
      case Op::min: --sp; stack[sp - 1] = min_of(stack[sp - 1], stack[sp]); break;
      case Op::max: --sp; stack[sp - 1] = max_of(stack[sp - 1], stack[sp]); break;
      case Op::neg: stack[sp - 1] = -stack[sp - 1]; break;
      case Op::pow: stack[sp - 1] = pow_scalar(stack[sp - 1], in.value); break;
      case Op::log1p: stack[sp - 1] = std::log1p(stack[sp - 1]); break;
      case Op::sin: stack[sp - 1] = std::sin(stack[sp - 1]); break;
      case Op::cos: stack[sp - 1] = std::cos(stack[sp - 1]); break;
      case Op::tan: stack[sp - 1] = std::tan(stack[sp - 1]); break;
    }
  }
  return stack[0];
}

}  // namespace probreach
