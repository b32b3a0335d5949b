#pragma once

#include <Eigen/Dense>

namespace rsbl {

/// Real linear map R^cols -> R^rows with matrix-free application.
///
/// Complex-valued operators expose their real embedding: real parts of all rows
/// first, then imaginary parts.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;

  virtual Eigen::Index rows() const = 0;
  virtual Eigen::Index cols() const = 0;

  virtual Eigen::VectorXd apply(const Eigen::VectorXd& x) const = 0;
  virtual Eigen::VectorXd apply_adjoint(const Eigen::VectorXd& y) const = 0;

  /// Column i of the result is sum_k w_k * A(k, i)^2, i.e. diag(A^T diag(w) A).
  /// The default materializes the operator; subclasses override with cheap forms.
  virtual Eigen::VectorXd weighted_column_sq(const Eigen::VectorXd& w) const;

  /// Dense matrix, built column by column from apply() unless overridden.
  virtual Eigen::MatrixXd dense() const;
};

/// Wraps an explicit dense matrix.
class DenseOperator final : public LinearOperator {
 public:
  explicit DenseOperator(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {}

  Eigen::Index rows() const override { return matrix_.rows(); }
  Eigen::Index cols() const override { return matrix_.cols(); }
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const override { return matrix_ * x; }
  Eigen::VectorXd apply_adjoint(const Eigen::VectorXd& y) const override {
    return matrix_.transpose() * y;
  }
  Eigen::VectorXd weighted_column_sq(const Eigen::VectorXd& w) const override {
    return matrix_.array().square().matrix().transpose() * w;
  }
  Eigen::MatrixXd dense() const override { return matrix_; }

  const Eigen::MatrixXd& matrix() const { return matrix_; }

 private:
  Eigen::MatrixXd matrix_;
};

}  // namespace rsbl
