#include "rsbl/linear_operator.hpp"

#include <stdexcept>

namespace rsbl {

Eigen::VectorXd LinearOperator::weighted_column_sq(const Eigen::VectorXd& w) const {
  if (w.size() != rows()) throw std::invalid_argument("weighted_column_sq: weight length mismatch");
  const Eigen::MatrixXd a = dense();
  return a.array().square().matrix().transpose() * w;
}

Eigen::MatrixXd LinearOperator::dense() const {
  Eigen::MatrixXd out(rows(), cols());
  Eigen::VectorXd e = Eigen::VectorXd::Zero(cols());
  for (Eigen::Index i = 0; i < cols(); ++i) {
    e[i] = 1.0;
    out.col(i) = apply(e);
    e[i] = 0.0;
  }
  return out;
}

}  // namespace rsbl
