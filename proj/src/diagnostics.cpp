#include "rsbl/diagnostics.hpp"

#include "rsbl/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace rsbl {

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& a, double rcond) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double cutoff = s.size() ? rcond * s[0] : 0.0;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > cutoff) inv[i] = 1.0 / s[i];
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

namespace {

Eigen::MatrixXd gram_pinv(const LinearForwardModel& model) {
  const Eigen::MatrixXd f = model.dense();
  return pseudo_inverse(f.transpose() * f);
}

void check_square(const Eigen::MatrixXd& m, const LinearForwardModel& model) {
  if (m.cols() != model.cols()) throw std::invalid_argument("transform and model disagree on signal length");
}

}  // namespace

Eigen::VectorXd ls_estimate(const Measurement& data) {
  return gram_pinv(data.model) * data.model.apply_adjoint(data.data);
}

double stacked_noise_variance(const LinearForwardModel& model, double alpha) {
  const double sd = noise_sd(model, alpha);
  return sd * sd;
}

Eigen::VectorXd estimator_variance(const Eigen::MatrixXd& transform, const LinearForwardModel& model,
                                   double alpha) {
  return estimator_cross_covariance(transform, transform, model, alpha);
}

Eigen::VectorXd estimator_cross_covariance(const Eigen::MatrixXd& local, const Eigen::MatrixXd& global,
                                           const LinearForwardModel& model, double alpha) {
  check_square(local, model);
  check_square(global, model);
  if (local.rows() != global.rows()) throw std::invalid_argument("transforms must have equal row counts");
  const Eigen::MatrixXd g = gram_pinv(model);
  const Eigen::MatrixXd tg = local * g;
  return stacked_noise_variance(model, alpha) * tg.cwiseProduct(global).rowwise().sum();
}

EstimatorStats estimator_stats(const Eigen::MatrixXd& local, const Eigen::MatrixXd& global,
                               const LinearForwardModel& model, const Eigen::VectorXd& truth, double alpha) {
  EstimatorStats st;
  st.mean_local = local * truth;
  st.mean_global = global * truth;
  st.mean_residual = st.mean_local - st.mean_global;
  st.var_local = estimator_variance(local, model, alpha);
  st.var_global = estimator_variance(global, model, alpha);
  st.cov_cross = estimator_cross_covariance(local, global, model, alpha);
  st.var_residual = st.var_local + st.var_global - 2.0 * st.cov_cross;
  return st;
}

EstimatorStats monte_carlo_stats(const Eigen::MatrixXd& local, const Eigen::MatrixXd& global,
                                 const LinearForwardModel& model, const Eigen::VectorXd& truth, double alpha,
                                 int draws, std::uint64_t seed) {
  if (draws < 2) throw std::invalid_argument("need at least two draws");
  check_square(local, model);
  check_square(global, model);
  const Eigen::MatrixXd g = gram_pinv(model);
  const Eigen::Index k = local.rows();
  Eigen::MatrixXd tx(k, draws), sx(k, draws);
  for (int d = 0; d < draws; ++d) {
    const Measurement m = acquire_with_alpha(truth, model, alpha, seed + static_cast<std::uint64_t>(d));
    const Eigen::VectorXd est = g * model.apply_adjoint(m.data);
    tx.col(d) = local * est;
    sx.col(d) = global * est;
  }
  EstimatorStats st;
  st.mean_local = tx.rowwise().mean();
  st.mean_global = sx.rowwise().mean();
  st.mean_residual = st.mean_local - st.mean_global;
  const Eigen::MatrixXd tc = tx.colwise() - st.mean_local;
  const Eigen::MatrixXd sc = sx.colwise() - st.mean_global;
  const Eigen::MatrixXd rc = tc - sc;
  const double denom = draws - 1.0;
  st.var_local = tc.cwiseAbs2().rowwise().sum() / denom;
  st.var_global = sc.cwiseAbs2().rowwise().sum() / denom;
  st.var_residual = rc.cwiseAbs2().rowwise().sum() / denom;
  st.cov_cross = tc.cwiseProduct(sc).rowwise().sum() / denom;
  return st;
}

Eigen::VectorXd fourier_domain_global_variance(int n, int p, double zeta, const LinearForwardModel& model,
                                               double alpha) {
  if (n > 32) throw std::invalid_argument("Fourier-domain cross-check limited to n <= 32");
  if (model.dims() != 1 || model.cols() != n) throw std::invalid_argument("model must be 1D of length n");
  const double ds = 2.0 * std::numbers::pi / n;
  const Grid grid = make_grid(n);
  const Eigen::MatrixXcd d = dft_matrix(n);
  const double lead = std::ldexp(1.0, 2 * p + 1) / (n * static_cast<double>(binomial(2 * p, p)));
  const std::complex<double> two_i(0.0, 2.0);
  // Row j of the real map e -> (S e)_j assembled as Re(sum_k g_jk c_k), c = D e.
  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    const double x = grid[j] + zeta * ds;
    Eigen::RowVectorXcd acc = Eigen::RowVectorXcd::Zero(n);
    for (int k = 1; k <= n / 2; ++k) {
      const double weight = (k == n / 2) ? 0.5 : 1.0;
      const double sigma = weight * std::pow(std::sin(k * ds / 2.0), 2 * p) * std::sin(k * ds / 2.0);
      const std::complex<double> g = lead * n * sigma * two_i * std::polar(1.0, k * x);
      const int row = (k == n / 2) ? 0 : k + n / 2;  // c_{n/2} = c_{-n/2} for real input
      acc += g * d.row(row);
    }
    rows.row(j) = acc.real();
  }
  const Eigen::MatrixXd cov = stacked_noise_variance(model, alpha) * gram_pinv(model);
  return (rows * cov).cwiseProduct(rows).rowwise().sum();
}

UnbiasednessReport unbiasedness_check(const Eigen::MatrixXd& transform, const LinearForwardModel& model,
                                      const Eigen::VectorXd& truth, double alpha, int draws, std::uint64_t seed,
                                      const Estimator& estimator) {
  if (draws < 1000) throw std::invalid_argument("unbiasedness check needs at least 1000 draws");
  check_square(transform, model);
  const Eigen::VectorXd target = transform * truth;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(transform.rows());
  Eigen::VectorXd sum_sq = Eigen::VectorXd::Zero(transform.rows());
  for (int d = 0; d < draws; ++d) {
    const Measurement m = acquire_with_alpha(truth, model, alpha, seed + static_cast<std::uint64_t>(d));
    const Eigen::VectorXd z = transform * estimator(m) - target;
    sum += z;
    sum_sq += z.cwiseAbs2();
  }
  const Eigen::VectorXd mean = sum / draws;
  const Eigen::VectorXd var = ((sum_sq - draws * mean.cwiseAbs2()) / (draws - 1.0)).cwiseMax(0.0);
  UnbiasednessReport r;
  r.max_deviation = mean.cwiseAbs().maxCoeff();
  r.max_standard_error = std::sqrt(var.maxCoeff() / draws);
  // Rounding allowance so noiseless data (zero standard error) can pass.
  const double rounding = 1e-12 * (1.0 + target.cwiseAbs().maxCoeff());
  r.passed = r.max_deviation <= 4.0 * r.max_standard_error + rounding;
  return r;
}

ErrorReport error_report(const Eigen::VectorXd& x, const Eigen::VectorXd& truth) {
  if (x.size() != truth.size()) throw std::invalid_argument("error_report: length mismatch");
  ErrorReport r;
  r.pointwise = (x - truth).cwiseAbs();
  r.mean_abs = r.pointwise.size() ? r.pointwise.mean() : 0.0;
  r.log10_pointwise = r.pointwise.cwiseMax(kLogErrorFloor).array().log10().matrix();
  return r;
}

void write_stats_csv(std::ostream& out, const EstimatorStats& stats) {
  out << "index,var_local,var_global,var_residual,cov_cross\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index j = 0; j < stats.var_local.size(); ++j)
    out << j << ',' << stats.var_local[j] << ',' << stats.var_global[j] << ',' << stats.var_residual[j] << ','
        << stats.cov_cross[j] << '\n';
}

}  // namespace rsbl
