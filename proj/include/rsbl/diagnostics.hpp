#pragma once

#include "rsbl/forward_models.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <iosfwd>

namespace rsbl {

/// Moore-Penrose pseudo-inverse by SVD; singular values below rcond * sigma_max are dropped.
Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& a, double rcond = 1e-10);

/// x_est = (F^T F)^+ F^T y.
Eigen::VectorXd ls_estimate(const Measurement& data);

/// Per-row noise variance of the real-stacked data: 1/alpha, or 1/(2 alpha) for
/// partial Fourier.
double stacked_noise_variance(const LinearForwardModel& model, double alpha);

/// diag(Phi (F^T F)^+ Phi^T) scaled by the stacked noise variance.
Eigen::VectorXd estimator_variance(const Eigen::MatrixXd& transform, const LinearForwardModel& model, double alpha);

/// diag(T (F^T F)^+ S^T) scaled by the stacked noise variance.
Eigen::VectorXd estimator_cross_covariance(const Eigen::MatrixXd& local, const Eigen::MatrixXd& global,
                                           const LinearForwardModel& model, double alpha);

struct EstimatorStats {
  Eigen::VectorXd mean_local;
  Eigen::VectorXd mean_global;
  Eigen::VectorXd mean_residual;
  Eigen::VectorXd var_local;
  Eigen::VectorXd var_global;
  Eigen::VectorXd var_residual;
  Eigen::VectorXd cov_cross;
};

/// Closed-form statistics of T x_est, S x_est and R x_est = (T - S) x_est.
/// var_residual uses var_local + var_global - 2 cov_cross.
EstimatorStats estimator_stats(const Eigen::MatrixXd& local, const Eigen::MatrixXd& global,
                               const LinearForwardModel& model, const Eigen::VectorXd& truth, double alpha);

/// The same statistics estimated from `draws` noisy acquisitions (unbiased sample
/// variances). Noise seeds are seed, seed + 1, ...
EstimatorStats monte_carlo_stats(const Eigen::MatrixXd& local, const Eigen::MatrixXd& global,
                                 const LinearForwardModel& model, const Eigen::VectorXd& truth, double alpha,
                                 int draws, std::uint64_t seed);

/// S-variance through the Fourier coefficients of the noise (1D, n <= 32 only).
/// With x_est = x + e and Fourier coefficient vector c = D e, (S e)_j = sum_k h_{jk} c_k
/// for the complex weights h of the concentration sum, giving var_j = h_j^H Cov(c) h_j.
Eigen::VectorXd fourier_domain_global_variance(int n, int p, double zeta, const LinearForwardModel& model,
                                               double alpha);

struct UnbiasednessReport {
  double max_deviation = 0.0;
  double max_standard_error = 0.0;
  bool passed = false;
};

using Estimator = std::function<Eigen::VectorXd(const Measurement&)>;

/// Mean of Phi x_est over draws versus Phi truth; passes when the max deviation is at
/// most 4 standard errors. Requires draws >= 1000.
UnbiasednessReport unbiasedness_check(const Eigen::MatrixXd& transform, const LinearForwardModel& model,
                                      const Eigen::VectorXd& truth, double alpha, int draws, std::uint64_t seed,
                                      const Estimator& estimator = ls_estimate);

struct ErrorReport {
  Eigen::VectorXd pointwise;
  double mean_abs = 0.0;
  Eigen::VectorXd log10_pointwise;
};

inline constexpr double kLogErrorFloor = 1e-16;

ErrorReport error_report(const Eigen::VectorXd& x, const Eigen::VectorXd& truth);

/// Header index,var_local,var_global,var_residual,cov_cross.
void write_stats_csv(std::ostream& out, const EstimatorStats& stats);

}  // namespace rsbl
