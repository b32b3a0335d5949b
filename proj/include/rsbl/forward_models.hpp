#pragma once

#include "rsbl/linear_operator.hpp"
#include "rsbl/signals.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rsbl {

enum class ModelKind { identity, blur, subsample, partial_fourier };

ModelKind parse_model_kind(std::string_view name);
std::string to_string(ModelKind kind);

/// Fourier coefficient matrix on the periodic grid: row k + n/2 holds
/// (1/n) exp(-i k s_j) over columns j, for k = -n/2 .. n/2-1.
Eigen::MatrixXcd dft_matrix(int n);

/// Row-normalized periodic Gaussian point spread on the grid: entry (j, j')
/// proportional to exp(-d^2 / (2 gamma^2)) with d the wrapped distance between
/// s_j and s_{j'} in radians.
Eigen::MatrixXd blur_matrix(int n, double gamma);

/// m = round((1 - r) * count) distinct indices in [0, count), sorted ascending.
/// Throws if r is outside [0, 1) or m would be zero.
std::vector<int> random_mask(int count, double r, std::uint64_t seed);

/// Measurement operator F acting on a signal (dims = 1) or on a column-major
/// n x n image (dims = 2). Two-dimensional blur and Fourier models are
/// separable: the 1D axis matrix is applied along both axes.
///
/// The LinearOperator view is real. For partial_fourier it stacks the real
/// parts of the m retained coefficients over their imaginary parts, so rows()
/// is 2m while measurement_count() is m.
class LinearForwardModel final : public LinearOperator {
 public:
  static LinearForwardModel identity(int n, int dims = 1);
  static LinearForwardModel blur(int n, double gamma, int dims = 1);
  static LinearForwardModel subsample(int n, double r, std::uint64_t seed, int dims = 1);
  static LinearForwardModel partial_fourier(int n, double r, std::uint64_t seed, int dims = 1);

  ModelKind kind() const { return kind_; }
  int side() const { return side_; }
  int dims() const { return dims_; }
  bool is_complex() const { return kind_ == ModelKind::partial_fourier; }
  /// Number of (possibly complex) measurements m.
  int measurement_count() const { return measurements_; }
  const std::vector<int>& mask() const { return mask_; }
  std::optional<double> psf_gamma() const { return gamma_; }
  std::optional<std::uint64_t> seed() const { return seed_; }
  double ratio() const { return ratio_; }

  Eigen::Index rows() const override;
  Eigen::Index cols() const override;
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd apply_adjoint(const Eigen::VectorXd& y) const override;
  Eigen::VectorXd weighted_column_sq(const Eigen::VectorXd& w) const override;
  Eigen::MatrixXd dense() const override;

  /// F x as m complex values (imaginary parts zero for real kinds).
  Eigen::VectorXcd apply_complex(const Eigen::VectorXd& x) const;
  /// Complex m x cols matrix. Dense forms of 2D models are limited to n <= 64.
  Eigen::MatrixXcd complex_matrix() const;

  /// Real-stacked vector from m complex measurements.
  Eigen::VectorXd stack(const Eigen::VectorXcd& y) const;
  /// Inverse of stack().
  Eigen::VectorXcd unstack(const Eigen::VectorXd& y) const;

 private:
  LinearForwardModel() = default;

  // Full transform along every axis, before masking.
  Eigen::VectorXcd transform_full(const Eigen::VectorXd& x) const;
  Eigen::VectorXd transform_full_adjoint(const Eigen::VectorXcd& z) const;
  Eigen::VectorXd apply_axis_real(const Eigen::MatrixXd& axis, const Eigen::VectorXd& x) const;

  ModelKind kind_ = ModelKind::identity;
  int side_ = 0;
  int dims_ = 1;
  int measurements_ = 0;
  double ratio_ = 0.0;
  std::vector<int> mask_;
  std::optional<double> gamma_;
  std::optional<std::uint64_t> seed_;
  Eigen::MatrixXd blur_axis_;
  Eigen::MatrixXcd dft_axis_;
};

/// One acquisition y = F x + noise with i.i.d. Gaussian noise of precision alpha.
/// data is the real-stacked vector (length model.rows()).
struct Measurement {
  Eigen::VectorXd data;
  LinearForwardModel model;
  double alpha = 1.0;
  double snr_db = std::numeric_limits<double>::infinity();

  Eigen::VectorXcd complex_data() const { return model.unstack(data); }
};

/// Ordered measurements sharing one signal length.
struct MeasurementSet {
  std::vector<Measurement> measurements;

  int size() const { return static_cast<int>(measurements.size()); }
  /// Throws if the members disagree on cols.
  void validate() const;
};

/// alpha = count * 10^(snr_db/10) / ||f||^2, where count is the number of entries.
double alpha_from_snr(const Eigen::VectorXd& signal, double snr_db);
double alpha_from_snr(const SignalVector& signal, double snr_db);

/// 10 log10(alpha ||f||^2 / count).
double snr_from_alpha(const Eigen::VectorXd& signal, double alpha);

/// Simulates y = F f + eps. snr_db = +inf produces noiseless data (alpha is then
/// set to 1 so downstream solvers still see a finite precision). Real models
/// add N(0, 1/alpha) per entry; partial Fourier adds N(0, 1/(2 alpha)) to the
/// real and imaginary part of each coefficient.
Measurement acquire(const Eigen::VectorXd& signal, const LinearForwardModel& model, double snr_db,
                    std::uint64_t noise_seed);
Measurement acquire(const SignalVector& signal, const LinearForwardModel& model, double snr_db,
                    std::uint64_t noise_seed);

/// Noise standard deviation per real-stacked entry: 1/sqrt(alpha), or
/// 1/sqrt(2 alpha) for partial Fourier.
double noise_sd(const LinearForwardModel& model, double alpha);

/// acquire() at an explicit noise precision.
Measurement acquire_with_alpha(const Eigen::VectorXd& signal, const LinearForwardModel& model, double alpha,
                               std::uint64_t noise_seed);

}  // namespace rsbl
