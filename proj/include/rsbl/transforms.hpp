#pragma once

#include "rsbl/linear_operator.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace rsbl {

enum class TransformKind { local, global, residual };

TransformKind parse_transform_kind(std::string_view name);
std::string to_string(TransformKind kind);

/// Stencil weights of the (2p+1)-order local differencing edge detector.
struct StencilCoefficients {
  int p = 0;
  /// q[l] = binom(2p, p + l) for l = 0..p.
  std::vector<std::int64_t> q;
  /// q_{0,p} = binom(2p, p).
  std::int64_t q0 = 1;
  /// w[l] = (-1)^l binom(2p+1, p-l) for l = 0..p; row j of the unscaled stencil is
  /// sum_l w[l] (f_{j+1+l} - f_{j-l}).
  std::vector<std::int64_t> weights;
};

std::int64_t binomial(int n, int k);
StencilCoefficients stencil_coefficients(int p);

/// Sparsifying operator Phi on a length-n periodic signal, held as a dense
/// n x n matrix.
class PriorTransform final : public LinearOperator {
 public:
  PriorTransform(TransformKind kind, int n, int p, double zeta, Eigen::MatrixXd matrix);

  TransformKind kind() const { return kind_; }
  int n() const { return n_; }
  int p() const { return p_; }
  double zeta() const { return zeta_; }
  const Eigen::MatrixXd& matrix() const { return matrix_; }

  Eigen::Index rows() const override { return matrix_.rows(); }
  Eigen::Index cols() const override { return matrix_.cols(); }
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const override { return matrix_ * x; }
  Eigen::VectorXd apply_adjoint(const Eigen::VectorXd& y) const override {
    return matrix_.transpose() * y;
  }
  Eigen::VectorXd weighted_column_sq(const Eigen::VectorXd& w) const override;
  Eigen::MatrixXd dense() const override { return matrix_; }

 private:
  TransformKind kind_;
  int n_;
  int p_;
  double zeta_;
  Eigen::MatrixXd matrix_;
};

/// Scaled (2p+1)-order differencing T: (T f)_j = (1/q0) sum_l w_l (f_{j+1+l} - f_{j-l}),
/// indices periodic. Requires n > 2p + 2.
PriorTransform local_transform(int n, int p);

/// Concentration-factor edge detector S_{n,zeta} with sigma_{2p+1}, evaluating the
/// jump approximation at s_{j+zeta}:
///   S(j,j') = 2^{2p+1}/(n q0) sum_{k=1}^{n/2} c_k sin^{2p}(k ds/2)
///             (cos(k ds phi+) - cos(k ds phi-)),
/// phi+ = j - j' + 1/2 + zeta, phi- = j - j' - 1/2 + zeta. The Nyquist term k = n/2
/// carries c_k = 1/2 (all others 1), which makes S at zeta = 1/2 coincide with T.
PriorTransform concentration_transform(int n, int p, double zeta);

/// R = T - S.
PriorTransform residual_transform(int n, int p, double zeta);

PriorTransform make_transform(TransformKind kind, int n, int p, double zeta);

/// Full-precision row-major CSV of the matrix (no header).
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& matrix);

/// Separable 2D extension of a 1D transform acting on column-major n x n images:
/// rows [0, n^2) apply the base transform along the first image axis (within each
/// column), rows [n^2, 2n^2) along the second axis (within each row).
class SeparableTransform2D final : public LinearOperator {
 public:
  explicit SeparableTransform2D(PriorTransform base);

  const PriorTransform& base() const { return base_; }
  int side() const { return base_.n(); }

  Eigen::Index rows() const override;
  Eigen::Index cols() const override;
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd apply_adjoint(const Eigen::VectorXd& y) const override;
  Eigen::VectorXd weighted_column_sq(const Eigen::VectorXd& w) const override;
  /// Dense form, limited to n <= 64.
  Eigen::MatrixXd dense() const override;

 private:
  PriorTransform base_;
};

/// Dense [I (x) B; B (x) I] built with explicit Kronecker products.
Eigen::MatrixXd kronecker_stack(const Eigen::MatrixXd& base);

}  // namespace rsbl
