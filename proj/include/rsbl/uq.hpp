#pragma once

#include "rsbl/forward_models.hpp"
#include "rsbl/linear_operator.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>

namespace rsbl {

/// Gaussian conditional of x given theta: precision P = alpha F^T F + Phi^T D_theta Phi,
/// mean mu solving P mu = alpha F^T y. Dense; intended for n <= 512 (64 x 64 images
/// at most in 2D).
class ConditionalPosterior {
 public:
  ConditionalPosterior(const Measurement& data, const LinearOperator& transform, const Eigen::VectorXd& theta);

  /// From an explicit precision and right-hand side alpha F^T y.
  ConditionalPosterior(Eigen::MatrixXd precision, const Eigen::VectorXd& rhs, Eigen::VectorXd theta);

  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& precision() const { return precision_; }
  const Eigen::VectorXd& theta() const { return theta_; }
  Eigen::Index size() const { return mean_.size(); }

  /// Sigma = P^{-1}, computed on first use.
  const Eigen::MatrixXd& covariance() const;
  Eigen::VectorXd variance() const;

  /// count draws as columns: mu + C^{-T} z with P = C C^T.
  Eigen::MatrixXd sample(int count, std::uint64_t seed) const;

 private:
  void factor();

  Eigen::MatrixXd precision_;
  Eigen::VectorXd theta_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd mean_;
  mutable Eigen::MatrixXd covariance_;
  mutable bool has_covariance_ = false;
};

struct CredibleBand {
  double level = 0.0;
  Eigen::VectorXd mean;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

/// Standard normal quantile.
double normal_quantile(double p);

/// mu_j +- z_{(1+level)/2} sqrt(Sigma_jj).
CredibleBand credible_band(const ConditionalPosterior& posterior, double level);

/// Header index,mean,lower,upper.
void write_band_csv(std::ostream& out, const CredibleBand& band);

}  // namespace rsbl
