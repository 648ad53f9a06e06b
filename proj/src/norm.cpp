#include "probreach/norm.hpp"

#include <cmath>
#include <string>

namespace probreach {

NormSpec::NormSpec(std::size_t dim)
    : kind_(NormKind::euclidean),
      dim_(dim),
      weight_(Matrix::Identity(dim, dim)),
      transform_(Matrix::Identity(dim, dim)),
      inverse_transform_(Matrix::Identity(dim, dim)) {
  // dim 0 is the (trivial) norm of an input-free system.
}

NormSpec::NormSpec(Matrix weight) : kind_(NormKind::weighted), dim_(weight.rows()), weight_(std::move(weight)) {
  require(dim_ > 0 && weight_.rows() == weight_.cols(), "weight matrix must be square and non-empty");
  require(weight_.allFinite(), "weight matrix must be finite");
  const double asym = (weight_ - weight_.transpose()).cwiseAbs().maxCoeff();
  require(asym <= 1e-12 * std::max(1.0, weight_.cwiseAbs().maxCoeff()), "weight matrix must be symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(weight_);
  require(eig.info() == Eigen::Success, "eigen-decomposition of the weight matrix failed");
  const Vector& lambda = eig.eigenvalues();
  require(lambda.minCoeff() > 0.0, "weight matrix must be positive definite");
  const Matrix& q = eig.eigenvectors();
  transform_ = q * lambda.cwiseSqrt().asDiagonal() * q.transpose();
  inverse_transform_ = q * lambda.cwiseSqrt().cwiseInverse().asDiagonal() * q.transpose();
  // Exact diagonal roots keep diag(1,1,100,50) free of eigen-solver noise.
  if (is_diagonal()) {
    transform_ = weight_.diagonal().cwiseSqrt().asDiagonal();
    inverse_transform_ = weight_.diagonal().cwiseSqrt().cwiseInverse().asDiagonal();
  }
}

NormSpec NormSpec::diagonal(const Vector& weights) { return NormSpec(Matrix(weights.asDiagonal())); }

bool NormSpec::is_diagonal() const {
  return (weight_ - Matrix(weight_.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
}

Vector NormSpec::to_frame(const Vector& x) const {
  require(static_cast<std::size_t>(x.size()) == dim_,
          "dimension mismatch: vector has " + std::to_string(x.size()) + " entries, norm expects " +
              std::to_string(dim_));
  if (kind_ == NormKind::euclidean) return x;
  return transform_ * x;
}

Vector NormSpec::from_frame(const Vector& z) const {
  require(static_cast<std::size_t>(z.size()) == dim_, "dimension mismatch");
  if (kind_ == NormKind::euclidean) return z;
  return inverse_transform_ * z;
}

double NormSpec::operator()(const Vector& x) const {
  require(static_cast<std::size_t>(x.size()) == dim_,
          "dimension mismatch: vector has " + std::to_string(x.size()) + " entries, norm expects " +
              std::to_string(dim_));
  if (kind_ == NormKind::euclidean) return x.norm();
  return std::sqrt(std::max(0.0, x.dot(weight_ * x)));
}

double weighted_norm(const Vector& x, const NormSpec& norm) { return norm(x); }

double induced_norm(const Matrix& m, const NormSpec& out, const NormSpec& in) {
  require(static_cast<std::size_t>(m.rows()) == out.dim() && static_cast<std::size_t>(m.cols()) == in.dim(),
          "induced_norm: shape mismatch");
  const Matrix scaled = out.transform() * m * in.inverse_transform();
  Eigen::JacobiSVD<Matrix> svd(scaled);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

}  // namespace probreach
