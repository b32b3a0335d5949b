#include "rsbl/uq.hpp"

#include <boost/math/distributions/normal.hpp>

#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>

namespace rsbl {

ConditionalPosterior::ConditionalPosterior(const Measurement& data, const LinearOperator& transform,
                                           const Eigen::VectorXd& theta)
    : theta_(theta) {
  if (data.model.cols() != transform.cols()) throw std::invalid_argument("model and transform size mismatch");
  if (theta.size() != transform.rows()) throw std::invalid_argument("theta length must equal transform rows");
  for (Eigen::Index k = 0; k < theta.size(); ++k)
    if (!(theta[k] > 0.0)) throw std::invalid_argument("theta must be strictly positive");
  if (data.model.cols() > 4096) throw std::invalid_argument("dense posterior limited to 4096 unknowns");
  const Eigen::MatrixXd f = data.model.dense();
  const Eigen::MatrixXd phi = transform.dense();
  precision_ = data.alpha * (f.transpose() * f);
  precision_.noalias() += phi.transpose() * theta.asDiagonal() * phi;
  precision_ = 0.5 * (precision_ + precision_.transpose());
  factor();
  mean_ = llt_.solve(data.alpha * data.model.apply_adjoint(data.data));
}

ConditionalPosterior::ConditionalPosterior(Eigen::MatrixXd precision, const Eigen::VectorXd& rhs,
                                           Eigen::VectorXd theta)
    : precision_(std::move(precision)), theta_(std::move(theta)) {
  if (precision_.rows() != precision_.cols() || precision_.rows() != rhs.size())
    throw std::invalid_argument("precision must be square and match rhs");
  factor();
  mean_ = llt_.solve(rhs);
}

void ConditionalPosterior::factor() {
  llt_.compute(precision_);
  if (llt_.info() != Eigen::Success)
    throw std::runtime_error("posterior precision is not positive definite (shared kernel of F and Phi)");
}

const Eigen::MatrixXd& ConditionalPosterior::covariance() const {
  if (!has_covariance_) {
    covariance_ = llt_.solve(Eigen::MatrixXd::Identity(size(), size()));
    has_covariance_ = true;
  }
  return covariance_;
}

Eigen::VectorXd ConditionalPosterior::variance() const { return covariance().diagonal(); }

Eigen::MatrixXd ConditionalPosterior::sample(int count, std::uint64_t seed) const {
  if (count < 0) throw std::invalid_argument("sample count must be nonnegative");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd z(size(), count);
  for (int c = 0; c < count; ++c)
    for (Eigen::Index i = 0; i < size(); ++i) z(i, c) = normal(rng);
  // P = C C^T, so C^{-T} z has covariance (C C^T)^{-1}.
  Eigen::MatrixXd draws = llt_.matrixU().solve(z);
  draws.colwise() += mean_;
  return draws;
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("quantile probability must be in (0, 1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

CredibleBand credible_band(const ConditionalPosterior& posterior, double level) {
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("level must be in (0, 1)");
  const double z = normal_quantile(0.5 * (1.0 + level));
  const Eigen::VectorXd half = z * posterior.variance().cwiseMax(0.0).cwiseSqrt();
  CredibleBand band;
  band.level = level;
  band.mean = posterior.mean();
  band.lower = band.mean - half;
  band.upper = band.mean + half;
  return band;
}

void write_band_csv(std::ostream& out, const CredibleBand& band) {
  out << "index,mean,lower,upper\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index j = 0; j < band.mean.size(); ++j)
    out << j << ',' << band.mean[j] << ',' << band.lower[j] << ',' << band.upper[j] << '\n';
}

}  // namespace rsbl
