#include "rsbl/forward_models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

namespace rsbl {
namespace {

constexpr double kPi = std::numbers::pi;

void check_side(int n, int dims) {
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("forward model: n must be even and >= 4");
  if (dims != 1 && dims != 2) throw std::invalid_argument("forward model: dims must be 1 or 2");
}

// Column-major n x n view of a length n*n vector.
template <typename Vec>
auto as_square(Vec& v, int n) {
  using Scalar = typename std::remove_const_t<Vec>::Scalar;
  using Map = std::conditional_t<std::is_const_v<Vec>,
                                 Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>>,
                                 Eigen::Map<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>>>;
  return Map(v.data(), n, n);
}

}  // namespace

ModelKind parse_model_kind(std::string_view name) {
  if (name == "identity") return ModelKind::identity;
  if (name == "blur") return ModelKind::blur;
  if (name == "subsample") return ModelKind::subsample;
  if (name == "partial_fourier") return ModelKind::partial_fourier;
  throw std::invalid_argument("unknown forward model kind: " + std::string(name));
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::identity: return "identity";
    case ModelKind::blur: return "blur";
    case ModelKind::subsample: return "subsample";
    case ModelKind::partial_fourier: return "partial_fourier";
  }
  return "unknown";
}

Eigen::MatrixXcd dft_matrix(int n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("dft_matrix: n must be even");
  Eigen::MatrixXcd d(n, n);
  for (int row = 0; row < n; ++row) {
    const int k = row - n / 2;
    for (int j = 0; j < n; ++j) {
      // k * s_j = k * (-pi + j ds); reduce the phase exactly through integers.
      const long long turns = static_cast<long long>(k) * (2LL * j - n);  // in units of pi/n
      const double phase = kPi * static_cast<double>(turns % (2LL * n)) / n;
      d(row, j) = std::polar(1.0 / n, -phase);
    }
  }
  return d;
}

Eigen::MatrixXd blur_matrix(int n, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("blur_matrix: gamma must be positive");
  const double ds = 2.0 * kPi / n;
  Eigen::VectorXd kernel(n);
  for (int d = 0; d < n; ++d) {
    const double dist = std::min(d, n - d) * ds;
    kernel[d] = std::exp(-dist * dist / (2.0 * gamma * gamma));
  }
  kernel /= kernel.sum();
  Eigen::MatrixXd b(n, n);
  for (int j = 0; j < n; ++j) {
    for (int jp = 0; jp < n; ++jp) {
      b(j, jp) = kernel[((jp - j) % n + n) % n];
    }
  }
  return b;
}

std::vector<int> random_mask(int count, double r, std::uint64_t seed) {
  if (!(r >= 0.0 && r < 1.0)) throw std::invalid_argument("random_mask: ratio must lie in [0, 1)");
  const int m = static_cast<int>(std::lround((1.0 - r) * count));
  if (m <= 0) throw std::invalid_argument("random_mask: ratio leaves no rows");
  std::vector<int> idx(static_cast<std::size_t>(count));
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates: the first m slots become a uniform sample.
  for (int i = 0; i < m; ++i) {
    std::uniform_int_distribution<int> pick(i, count - 1);
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(pick(rng))]);
  }
  idx.resize(static_cast<std::size_t>(m));
  std::sort(idx.begin(), idx.end());
  return idx;
}

LinearForwardModel LinearForwardModel::identity(int n, int dims) {
  check_side(n, dims);
  LinearForwardModel f;
  f.kind_ = ModelKind::identity;
  f.side_ = n;
  f.dims_ = dims;
  f.measurements_ = dims == 1 ? n : n * n;
  return f;
}

LinearForwardModel LinearForwardModel::blur(int n, double gamma, int dims) {
  check_side(n, dims);
  LinearForwardModel f;
  f.kind_ = ModelKind::blur;
  f.side_ = n;
  f.dims_ = dims;
  f.measurements_ = dims == 1 ? n : n * n;
  f.gamma_ = gamma;
  f.blur_axis_ = blur_matrix(n, gamma);
  return f;
}

LinearForwardModel LinearForwardModel::subsample(int n, double r, std::uint64_t seed, int dims) {
  check_side(n, dims);
  LinearForwardModel f;
  f.kind_ = ModelKind::subsample;
  f.side_ = n;
  f.dims_ = dims;
  f.ratio_ = r;
  f.seed_ = seed;
  f.mask_ = random_mask(dims == 1 ? n : n * n, r, seed);
  f.measurements_ = static_cast<int>(f.mask_.size());
  return f;
}

LinearForwardModel LinearForwardModel::partial_fourier(int n, double r, std::uint64_t seed,
                                                       int dims) {
  check_side(n, dims);
  LinearForwardModel f;
  f.kind_ = ModelKind::partial_fourier;
  f.side_ = n;
  f.dims_ = dims;
  f.ratio_ = r;
  f.seed_ = seed;
  f.mask_ = random_mask(dims == 1 ? n : n * n, r, seed);
  f.measurements_ = static_cast<int>(f.mask_.size());
  f.dft_axis_ = dft_matrix(n);
  return f;
}

Eigen::Index LinearForwardModel::rows() const {
  return is_complex() ? 2 * measurements_ : measurements_;
}

Eigen::Index LinearForwardModel::cols() const { return dims_ == 1 ? side_ : side_ * side_; }

Eigen::VectorXd LinearForwardModel::apply_axis_real(const Eigen::MatrixXd& axis,
                                                    const Eigen::VectorXd& x) const {
  if (dims_ == 1) return axis * x;
  Eigen::VectorXd out(x.size());
  auto img = as_square(x, side_);
  auto res = as_square(out, side_);
  res.noalias() = axis * img * axis.transpose();
  return out;
}

Eigen::VectorXcd LinearForwardModel::transform_full(const Eigen::VectorXd& x) const {
  const Eigen::VectorXcd xc = x.cast<std::complex<double>>();
  if (dims_ == 1) return dft_axis_ * xc;
  Eigen::VectorXcd out(x.size());
  auto img = as_square(xc, side_);
  auto res = as_square(out, side_);
  res.noalias() = dft_axis_ * img * dft_axis_.transpose();
  return out;
}

Eigen::VectorXd LinearForwardModel::transform_full_adjoint(const Eigen::VectorXcd& z) const {
  if (dims_ == 1) return (dft_axis_.adjoint() * z).real();
  Eigen::VectorXcd out(z.size());
  auto coef = as_square(z, side_);
  auto res = as_square(out, side_);
  res.noalias() = dft_axis_.adjoint() * coef * dft_axis_.conjugate();
  return out.real();
}

Eigen::VectorXd LinearForwardModel::apply(const Eigen::VectorXd& x) const {
  if (x.size() != cols()) throw std::invalid_argument("forward model apply: dimension mismatch");
  switch (kind_) {
    case ModelKind::identity:
      return x;
    case ModelKind::blur:
      return apply_axis_real(blur_axis_, x);
    case ModelKind::subsample: {
      Eigen::VectorXd y(measurements_);
      for (int i = 0; i < measurements_; ++i) y[i] = x[mask_[static_cast<std::size_t>(i)]];
      return y;
    }
    case ModelKind::partial_fourier:
      return stack(apply_complex(x));
  }
  throw std::logic_error("forward model apply: unreachable");
}

Eigen::VectorXcd LinearForwardModel::apply_complex(const Eigen::VectorXd& x) const {
  if (x.size() != cols()) throw std::invalid_argument("forward model apply: dimension mismatch");
  if (!is_complex()) return apply(x).cast<std::complex<double>>();
  const Eigen::VectorXcd full = transform_full(x);
  Eigen::VectorXcd y(measurements_);
  for (int i = 0; i < measurements_; ++i) y[i] = full[mask_[static_cast<std::size_t>(i)]];
  return y;
}

Eigen::VectorXd LinearForwardModel::apply_adjoint(const Eigen::VectorXd& y) const {
  if (y.size() != rows()) {
    throw std::invalid_argument("forward model adjoint: dimension mismatch");
  }
  switch (kind_) {
    case ModelKind::identity:
      return y;
    case ModelKind::blur: {
      if (dims_ == 1) return blur_axis_.transpose() * y;
      Eigen::VectorXd out(y.size());
      auto img = as_square(y, side_);
      auto res = as_square(out, side_);
      res.noalias() = blur_axis_.transpose() * img * blur_axis_;
      return out;
    }
    case ModelKind::subsample: {
      Eigen::VectorXd x = Eigen::VectorXd::Zero(cols());
      for (int i = 0; i < measurements_; ++i) x[mask_[static_cast<std::size_t>(i)]] += y[i];
      return x;
    }
    case ModelKind::partial_fourier: {
      const Eigen::VectorXcd yc = unstack(y);
      Eigen::VectorXcd full = Eigen::VectorXcd::Zero(cols());
      for (int i = 0; i < measurements_; ++i) full[mask_[static_cast<std::size_t>(i)]] += yc[i];
      return transform_full_adjoint(full);
    }
  }
  throw std::logic_error("forward model adjoint: unreachable");
}

Eigen::VectorXd LinearForwardModel::weighted_column_sq(const Eigen::VectorXd& w) const {
  if (w.size() != rows()) throw std::invalid_argument("weighted_column_sq: dimension mismatch");
  switch (kind_) {
    case ModelKind::identity:
      return w;
    case ModelKind::subsample: {
      Eigen::VectorXd out = Eigen::VectorXd::Zero(cols());
      for (int i = 0; i < measurements_; ++i) out[mask_[static_cast<std::size_t>(i)]] += w[i];
      return out;
    }
    case ModelKind::blur: {
      const Eigen::MatrixXd sq = blur_axis_.array().square().matrix();
      if (dims_ == 1) return sq.transpose() * w;
      Eigen::VectorXd out(w.size());
      auto wm = as_square(w, side_);
      auto res = as_square(out, side_);
      res.noalias() = sq.transpose() * wm * sq;
      return out;
    }
    case ModelKind::partial_fourier: {
      // Every DFT entry has modulus 1/n per axis, so uniform weights give a
      // constant diagonal.
      if ((w.array() == w[0]).all()) {
        const double per_entry = std::pow(1.0 / side_, 2 * dims_);
        return Eigen::VectorXd::Constant(cols(), w[0] * measurements_ * per_entry);
      }
      return LinearOperator::weighted_column_sq(w);
    }
  }
  throw std::logic_error("weighted_column_sq: unreachable");
}

Eigen::MatrixXcd LinearForwardModel::complex_matrix() const {
  if (dims_ == 2 && side_ > 64) {
    throw std::invalid_argument("complex_matrix: dense 2D forms are limited to n <= 64");
  }
  const Eigen::Index n = cols();
  Eigen::MatrixXcd out(measurements_, n);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    e[j] = 1.0;
    out.col(j) = apply_complex(e);
    e[j] = 0.0;
  }
  return out;
}

Eigen::MatrixXd LinearForwardModel::dense() const { return LinearOperator::dense(); }

Eigen::VectorXd LinearForwardModel::stack(const Eigen::VectorXcd& y) const {
  if (!is_complex()) return y.real();
  Eigen::VectorXd out(2 * y.size());
  out.head(y.size()) = y.real();
  out.tail(y.size()) = y.imag();
  return out;
}

Eigen::VectorXcd LinearForwardModel::unstack(const Eigen::VectorXd& y) const {
  if (!is_complex()) return y.cast<std::complex<double>>();
  const Eigen::Index m = y.size() / 2;
  Eigen::VectorXcd out(m);
  for (Eigen::Index i = 0; i < m; ++i) out[i] = {y[i], y[m + i]};
  return out;
}

void MeasurementSet::validate() const {
  if (measurements.empty()) throw std::invalid_argument("MeasurementSet: empty");
  const auto cols = measurements.front().model.cols();
  for (const auto& m : measurements) {
    if (m.model.cols() != cols) throw std::invalid_argument("MeasurementSet: mismatched n");
    if (m.data.size() != m.model.rows()) {
      throw std::invalid_argument("MeasurementSet: data length does not match its model");
    }
    if (!(m.alpha > 0.0)) throw std::invalid_argument("MeasurementSet: alpha must be positive");
  }
}

double alpha_from_snr(const Eigen::VectorXd& signal, double snr_db) {
  const double energy = signal.squaredNorm();
  if (!(energy > 0.0)) throw std::invalid_argument("alpha_from_snr: zero signal");
  return static_cast<double>(signal.size()) * std::pow(10.0, snr_db / 10.0) / energy;
}

double alpha_from_snr(const SignalVector& signal, double snr_db) {
  return alpha_from_snr(signal.values, snr_db);
}

double snr_from_alpha(const Eigen::VectorXd& signal, double alpha) {
  return 10.0 * std::log10(alpha * signal.squaredNorm() / static_cast<double>(signal.size()));
}

double noise_sd(const LinearForwardModel& model, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  return model.is_complex() ? std::sqrt(0.5 / alpha) : std::sqrt(1.0 / alpha);
}

Measurement acquire_with_alpha(const Eigen::VectorXd& signal, const LinearForwardModel& model, double alpha,
                               std::uint64_t noise_seed) {
  if (signal.size() != model.cols()) throw std::invalid_argument("acquire: dimension mismatch");
  const double sd = noise_sd(model, alpha);
  Measurement out{model.apply(signal), model, alpha, snr_from_alpha(signal, alpha)};
  std::mt19937_64 rng(noise_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Eigen::Index i = 0; i < out.data.size(); ++i) out.data[i] += sd * normal(rng);
  return out;
}

Measurement acquire(const Eigen::VectorXd& signal, const LinearForwardModel& model, double snr_db,
                    std::uint64_t noise_seed) {
  if (signal.size() != model.cols()) throw std::invalid_argument("acquire: dimension mismatch");
  if (std::isinf(snr_db) && snr_db > 0.0) return Measurement{model.apply(signal), model, 1.0, snr_db};
  Measurement out = acquire_with_alpha(signal, model, alpha_from_snr(signal, snr_db), noise_seed);
  out.snr_db = snr_db;
  return out;
}

Measurement acquire(const SignalVector& signal, const LinearForwardModel& model, double snr_db,
                    std::uint64_t noise_seed) {
  return acquire(signal.values, model, snr_db, noise_seed);
}

}  // namespace rsbl
