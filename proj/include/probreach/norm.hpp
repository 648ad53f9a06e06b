#pragma once

#include "probreach/core.hpp"

namespace probreach {

enum class NormKind { euclidean, weighted };

/// Euclidean or P-weighted norm ‖x‖_P = sqrt(xᵀPx). All weighted-norm math
/// runs in the transformed coordinates z = P^{1/2} x, where the norm is
/// Euclidean. Immutable once built.
class NormSpec {
 public:
  /// Euclidean norm on R^dim.
  explicit NormSpec(std::size_t dim);
  /// Weighted norm; `weight` must be symmetric positive definite.
  explicit NormSpec(Matrix weight);

  static NormSpec euclidean(std::size_t dim) { return NormSpec(dim); }
  static NormSpec weighted(Matrix weight) { return NormSpec(std::move(weight)); }
  static NormSpec diagonal(const Vector& weights);

  NormKind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return dim_; }
  bool is_euclidean() const noexcept { return kind_ == NormKind::euclidean; }
  bool is_diagonal() const;

  /// P (identity for the Euclidean norm).
  const Matrix& weight() const noexcept { return weight_; }
  /// Symmetric square root P^{1/2}.
  const Matrix& transform() const noexcept { return transform_; }
  const Matrix& inverse_transform() const noexcept { return inverse_transform_; }

  /// z = P^{1/2} x
  Vector to_frame(const Vector& x) const;
  Vector from_frame(const Vector& z) const;

  double operator()(const Vector& x) const;

 private:
  NormKind kind_;
  std::size_t dim_;
  Matrix weight_;
  Matrix transform_;
  Matrix inverse_transform_;
};

double weighted_norm(const Vector& x, const NormSpec& norm);

/// Induced operator norm ‖P_out^{1/2} M P_in^{-1/2}‖₂.
double induced_norm(const Matrix& m, const NormSpec& out, const NormSpec& in);

}  // namespace probreach
