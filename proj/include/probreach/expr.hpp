#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "probreach/interval.hpp"

namespace probreach {

/// Primitive-op vocabulary for dynamics that admit a natural inclusion
/// function: + - × negation, scalar powers, log1p, sin, cos, tan, min, max,
/// constants, state and input coordinates.
enum class Op { constant, state, input, add, sub, mul, neg, pow, log1p, sin, cos, tan, min, max };

const char* op_name(Op op);

class Expr {
 public:
  Expr() : Expr(0.0) {}
  Expr(double value);  // NOLINT: numeric literals build constants

  static Expr state(std::size_t index);
  static Expr input(std::size_t index);
  static Expr unary(Op op, Expr arg);
  static Expr binary(Op op, Expr lhs, Expr rhs);
  static Expr power(Expr base, double exponent);

  Op op() const noexcept { return node_->op; }
  double value() const noexcept { return node_->value; }
  std::size_t index() const noexcept { return node_->index; }
  const std::vector<Expr>& args() const noexcept { return node_->args; }

  /// Largest state / input index referenced, plus one.
  std::size_t state_arity() const;
  std::size_t input_arity() const;

  double eval(std::span<const double> x, std::span<const double> u) const;
  Interval eval(std::span<const Interval> x, std::span<const Interval> u) const;

  /// Parses the JSON s-expression form: numbers are constants, strings name
  /// "x<i>", "u<j>" or a parameter, arrays are [op, args...].
  static Expr from_json(const nlohmann::json& j, const std::map<std::string, double>& params = {});
  nlohmann::json to_json() const;

  friend Expr operator+(Expr a, Expr b) { return binary(Op::add, std::move(a), std::move(b)); }
  friend Expr operator-(Expr a, Expr b) { return binary(Op::sub, std::move(a), std::move(b)); }
  friend Expr operator*(Expr a, Expr b) { return binary(Op::mul, std::move(a), std::move(b)); }
  friend Expr operator-(Expr a) { return unary(Op::neg, std::move(a)); }

 private:
  struct Node {
    Op op = Op::constant;
    double value = 0.0;
    std::size_t index = 0;
    std::vector<Expr> args;
  };
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  template <class T>
  T evaluate(std::span<const T> x, std::span<const T> u) const;

  std::shared_ptr<const Node> node_;
};

/// Postfix program of an expression for fast scalar evaluation; gives the
/// same result as Expr::eval on doubles.
class CompiledExpr {
 public:
  explicit CompiledExpr(const Expr& expr);
  /// x and u must hold at least state_arity() / input_arity() values.
  double operator()(const double* x, const double* u) const;

 private:
  struct Instr {
    Op op;
    double value;
    std::size_t index;
  };
  void emit(const Expr& e, std::size_t depth);

  std::vector<Instr> code_;
  std::size_t max_depth_ = 0;
};

inline Expr log1p(Expr a) { return Expr::unary(Op::log1p, std::move(a)); }
inline Expr sin(Expr a) { return Expr::unary(Op::sin, std::move(a)); }
inline Expr cos(Expr a) { return Expr::unary(Op::cos, std::move(a)); }
inline Expr tan(Expr a) { return Expr::unary(Op::tan, std::move(a)); }
inline Expr min(Expr a, Expr b) { return Expr::binary(Op::min, std::move(a), std::move(b)); }
inline Expr max(Expr a, Expr b) { return Expr::binary(Op::max, std::move(a), std::move(b)); }
inline Expr pow(Expr a, double p) { return Expr::power(std::move(a), p); }

}  // namespace probreach
