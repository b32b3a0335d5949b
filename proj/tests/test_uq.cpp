#include "rsbl/transforms.hpp"
#include "rsbl/uq.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

rsbl::Measurement identity_data(int n, double snr, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  Eigen::VectorXd f(n);
  for (auto& v : f) v = d(rng);
  return rsbl::acquire(f, rsbl::LinearForwardModel::identity(n), snr, seed + 1);
}

rsbl::DenseOperator eye(int n) { return rsbl::DenseOperator(Eigen::MatrixXd::Identity(n, n)); }

TEST(Posterior, DiagonalCase) {
  const auto m = identity_data(16, 10, 1);
  const double c = 3.0;
  const rsbl::ConditionalPosterior post(m, eye(16), Eigen::VectorXd::Constant(16, c));
  EXPECT_LT((post.mean() - m.alpha / (m.alpha + c) * m.data).cwiseAbs().maxCoeff(), 1e-12);
  const Eigen::MatrixXd expect = Eigen::MatrixXd::Identity(16, 16) / (m.alpha + c);
  EXPECT_LT((post.covariance() - expect).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Posterior, PrecisionTimesCovarianceIsIdentity) {
  const int n = 48;
  const auto f = rsbl::sample_example(rsbl::SignalId::f3, rsbl::make_grid(n));
  const auto m = rsbl::acquire(f, rsbl::LinearForwardModel::partial_fourier(n, 0.5, 3), 20, 4);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.01, 10.0);
  Eigen::VectorXd theta(n);
  for (auto& t : theta) t = u(rng);
  const rsbl::ConditionalPosterior post(m, rsbl::residual_transform(n, 0, 0.25), theta);
  const Eigen::MatrixXd& p = post.precision();
  EXPECT_LT((p - p.transpose()).cwiseAbs().maxCoeff(), 1e-12 * p.cwiseAbs().maxCoeff());
  EXPECT_LT((p * post.covariance() - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-8);
  const Eigen::MatrixXd fd = m.model.dense();
  const Eigen::VectorXd rhs = m.alpha * fd.transpose() * m.data;
  EXPECT_LT((p * post.mean() - rhs).norm(), 1e-10 * rhs.norm());
}

TEST(Posterior, LargeThetaPullsTowardKernel) {
  // T annihilates constants, so a heavily weighted prior leaves the data mean.
  const auto m = identity_data(4, 10, 5);
  const rsbl::ConditionalPosterior post(m, rsbl::local_transform(4, 0), Eigen::VectorXd::Constant(4, 1e9));
  const double avg = m.data.mean();
  EXPECT_LT((post.mean() - Eigen::VectorXd::Constant(4, avg)).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Posterior, SharedKernelFailsFactorization) {
  // Constants lie in the kernel of T and of any Fourier mask missing the zero frequency.
  const int n = 16;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto model = rsbl::LinearForwardModel::partial_fourier(n, 0.5, seed);
    const auto& mask = model.mask();
    if (std::find(mask.begin(), mask.end(), n / 2) != mask.end()) continue;
    const auto m = rsbl::acquire(Eigen::VectorXd::Ones(n), model, kInf, 0);
    EXPECT_THROW(rsbl::ConditionalPosterior(m, rsbl::local_transform(n, 0), Eigen::VectorXd::Ones(n)),
                 std::runtime_error);
    return;
  }
  FAIL() << "no mask without the zero frequency found";
}

// Tensor Gauss-Hermite nodes and weights for the weight exp(-u^2 / 2) (Golub-Welsch).
void hermite_rule(int k, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(k, k);
  for (int i = 1; i < k; ++i) j(i, i - 1) = j(i - 1, i) = std::sqrt(double(i));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  nodes = es.eigenvalues();
  weights = std::sqrt(2 * std::numbers::pi) * es.eigenvectors().row(0).transpose().array().square();
}

// Oracle: moments of exp(-x^T P x / 2 + b^T x) by tensor quadrature around the Jacobi
// estimate. Only density evaluations are used.
TEST(Posterior, EightPointQuadratureOracle) {
  const int n = 8;
  const auto m = identity_data(n, 10, 7);
  const Eigen::VectorXd theta = Eigen::VectorXd::Constant(n, 0.15 * m.alpha);
  const rsbl::ConditionalPosterior post(m, rsbl::local_transform(n, 0), theta);

  const Eigen::MatrixXd t = rsbl::local_transform(n, 0).matrix();
  const Eigen::MatrixXd p = m.alpha * Eigen::MatrixXd::Identity(n, n) + t.transpose() * theta.asDiagonal() * t;
  const Eigen::VectorXd b = m.alpha * m.data;
  const Eigen::VectorXd scale = p.diagonal().cwiseSqrt().cwiseInverse();
  const Eigen::VectorXd center = b.cwiseQuotient(p.diagonal());

  const int k = 7;
  Eigen::VectorXd nodes, weights;
  hermite_rule(k, nodes, weights);
  long total = 1;
  for (int i = 0; i < n; ++i) total *= k;

  double z = 0;
  Eigen::VectorXd first = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd u(n), x(n);
  std::vector<int> idx(n, 0);
  const double log_ref = -0.5 * center.dot(p * center) + b.dot(center);
  for (long it = 0; it < total; ++it) {
    double w = 1;
    for (int i = 0; i < n; ++i) {
      u[i] = nodes[idx[i]];
      w *= weights[idx[i]];
    }
    x = center + scale.cwiseProduct(u);
    // Density divided by the quadrature weight function.
    const double log_density = -0.5 * x.dot(p * x) + b.dot(x) - log_ref + 0.5 * u.squaredNorm();
    const double v = w * std::exp(log_density);
    z += v;
    first += v * x;
    second += v * x * x.transpose();
    for (int i = 0; i < n && ++idx[i] == k; ++i) idx[i] = 0;
  }
  const Eigen::VectorXd mean = first / z;
  const Eigen::MatrixXd cov = second / z - mean * mean.transpose();
  const double sd = std::sqrt(post.covariance().diagonal().maxCoeff());
  EXPECT_LT((mean - post.mean()).cwiseAbs().maxCoeff(), 1e-4 * sd);
  EXPECT_LT((cov - post.covariance()).cwiseAbs().maxCoeff(), 1e-3 * sd * sd);
}

TEST(Sampling, DiagonalMonteCarlo) {
  const auto m = identity_data(4, 10, 3);
  const double c = 2.0;
  const rsbl::ConditionalPosterior post(m, eye(4), Eigen::VectorXd::Constant(4, c));
  const Eigen::MatrixXd draws = post.sample(10000, 42);
  ASSERT_EQ(draws.cols(), 10000);
  const Eigen::VectorXd mean = draws.rowwise().mean();
  const Eigen::MatrixXd centred = draws.colwise() - mean;
  const Eigen::VectorXd var = centred.rowwise().squaredNorm() / 9999.0;
  const double expect = 1.0 / (m.alpha + c);
  for (int j = 0; j < 4; ++j) {
    EXPECT_NEAR(var[j], expect, 0.05 * expect);
    EXPECT_NEAR(mean[j], post.mean()[j], 5 * std::sqrt(expect / 10000));
  }
}

TEST(Sampling, SeedReproducible) {
  const auto m = identity_data(12, 10, 3);
  const rsbl::ConditionalPosterior post(m, rsbl::residual_transform(12, 0, 0.25), Eigen::VectorXd::Ones(12));
  EXPECT_EQ(post.sample(20, 9), post.sample(20, 9));
  EXPECT_NE(post.sample(20, 9), post.sample(20, 10));
}

TEST(Sampling, SmallVarianceConcentrates) {
  const auto m = identity_data(8, 60, 3);
  const rsbl::ConditionalPosterior post(m, eye(8), Eigen::VectorXd::Constant(8, 1e8));
  const Eigen::MatrixXd draws = post.sample(100, 1);
  EXPECT_LT((draws.colwise() - post.mean()).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(Sampling, AffineCovariance) {
  const int n = 10;
  const auto m = identity_data(n, 5, 8);
  const rsbl::ConditionalPosterior post(m, rsbl::local_transform(n, 0), Eigen::VectorXd::Constant(n, 0.5));
  Eigen::MatrixXd a(2, n);
  a.setZero();
  a.row(0).setOnes();
  a(1, 0) = 1;
  a(1, 1) = -1;
  const int count = 40000;
  const Eigen::MatrixXd ax = a * post.sample(count, 5);
  const Eigen::MatrixXd centred = ax.colwise() - ax.rowwise().mean();
  const Eigen::MatrixXd emp = centred * centred.transpose() / (count - 1);
  const Eigen::MatrixXd exact = a * post.covariance() * a.transpose();
  for (int i = 0; i < 2; ++i) EXPECT_NEAR(emp(i, i), exact(i, i), 0.05 * exact(i, i));
  EXPECT_NEAR(emp(0, 1), exact(0, 1), 0.05 * std::sqrt(exact(0, 0) * exact(1, 1)));
}

TEST(Band, Quantile) {
  EXPECT_NEAR(rsbl::normal_quantile(0.995), 2.5758293035489004, 1e-12);
  EXPECT_NEAR(rsbl::normal_quantile(0.5), 0.0, 1e-15);
}

TEST(Band, DiagonalHalfWidth) {
  const auto m = identity_data(6, 10, 1);
  const double c = 1.5;
  const rsbl::ConditionalPosterior post(m, eye(6), Eigen::VectorXd::Constant(6, c));
  const auto band = rsbl::credible_band(post, 0.99);
  const double half = 2.5758293035489004 / std::sqrt(m.alpha + c);
  EXPECT_LT((band.upper - post.mean()).cwiseAbs().maxCoeff() - half, 1e-12);
  EXPECT_LT((band.upper - band.mean - (band.mean - band.lower)).cwiseAbs().maxCoeff(), 1e-14);
  const auto tiny = rsbl::credible_band(post, 1e-12);
  EXPECT_LT((tiny.upper - tiny.lower).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_THROW(rsbl::credible_band(post, 1.0), std::invalid_argument);
}

TEST(Band, WidensWithLevel) {
  const auto m = identity_data(16, 10, 2);
  const rsbl::ConditionalPosterior post(m, rsbl::residual_transform(16, 0, 0.25), Eigen::VectorXd::Ones(16));
  const auto a = rsbl::credible_band(post, 0.5);
  const auto b = rsbl::credible_band(post, 0.9);
  EXPECT_TRUE(((b.upper - b.lower).array() > (a.upper - a.lower).array()).all());
  EXPECT_TRUE((a.lower.array() <= a.mean.array()).all() && (a.mean.array() <= a.upper.array()).all());
}

TEST(Band, EmpiricalCoverage) {
  const int n = 20;
  const auto m = identity_data(n, 10, 4);
  const rsbl::ConditionalPosterior post(m, rsbl::local_transform(n, 0), Eigen::VectorXd::Constant(n, 2.0));
  const auto band = rsbl::credible_band(post, 0.9);
  const Eigen::MatrixXd draws = post.sample(5000, 11);
  long inside = 0;
  for (Eigen::Index c = 0; c < draws.cols(); ++c)
    for (int j = 0; j < n; ++j) inside += draws(j, c) >= band.lower[j] && draws(j, c) <= band.upper[j];
  const double frac = double(inside) / (n * 5000.0);
  EXPECT_NEAR(frac, 0.9, 0.01);
}

TEST(Band, CsvHeader) {
  const auto m = identity_data(4, 10, 1);
  const rsbl::ConditionalPosterior post(m, eye(4), Eigen::VectorXd::Ones(4));
  std::ostringstream out;
  rsbl::write_band_csv(out, rsbl::credible_band(post, 0.99));
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "index,mean,lower,upper");
}

}  // namespace
