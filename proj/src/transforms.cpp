#include "rsbl/transforms.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace rsbl {

TransformKind parse_transform_kind(std::string_view name) {
  if (name == "local" || name == "T") return TransformKind::local;
  if (name == "global" || name == "S") return TransformKind::global;
  if (name == "residual" || name == "R") return TransformKind::residual;
  throw std::invalid_argument("unknown transform: " + std::string(name));
}

std::string to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::local: return "local";
    case TransformKind::global: return "global";
    case TransformKind::residual: return "residual";
  }
  return "?";
}

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

StencilCoefficients stencil_coefficients(int p) {
  if (p < 0 || p > 20) throw std::invalid_argument("stencil order p must be in [0, 20]");
  StencilCoefficients c;
  c.p = p;
  c.q0 = binomial(2 * p, p);
  for (int l = 0; l <= p; ++l) {
    c.q.push_back(binomial(2 * p, p + l));
    const std::int64_t sign = (l % 2 == 0) ? 1 : -1;
    c.weights.push_back(sign * binomial(2 * p + 1, p - l));
  }
  return c;
}

PriorTransform::PriorTransform(TransformKind kind, int n, int p, double zeta, Eigen::MatrixXd matrix)
    : kind_(kind), n_(n), p_(p), zeta_(zeta), matrix_(std::move(matrix)) {
  if (matrix_.rows() != n || matrix_.cols() != n)
    throw std::invalid_argument("PriorTransform: matrix must be n x n");
}

Eigen::VectorXd PriorTransform::weighted_column_sq(const Eigen::VectorXd& w) const {
  if (w.size() != n_) throw std::invalid_argument("weighted_column_sq: weight length mismatch");
  return matrix_.array().square().matrix().transpose() * w;
}

namespace {

void check_size(int n, int p) {
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("transform size must be even and >= 4");
  if (p < 0) throw std::invalid_argument("stencil order p must be >= 0");
  if (n <= 2 * p + 2) throw std::invalid_argument("stencil wider than the grid");
}

int wrap(int j, int n) { return ((j % n) + n) % n; }

}  // namespace

PriorTransform local_transform(int n, int p) {
  check_size(n, p);
  const StencilCoefficients c = stencil_coefficients(p);
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  const double scale = 1.0 / static_cast<double>(c.q0);
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l <= p; ++l) {
      const double w = scale * static_cast<double>(c.weights[static_cast<std::size_t>(l)]);
      t(j, wrap(j + 1 + l, n)) += w;
      t(j, wrap(j - l, n)) -= w;
    }
  }
  return PriorTransform(TransformKind::local, n, p, 0.0, std::move(t));
}

PriorTransform concentration_transform(int n, int p, double zeta) {
  check_size(n, p);
  if (!std::isfinite(zeta)) throw std::invalid_argument("zeta must be finite");
  const double ds = 2.0 * std::numbers::pi / n;
  const double q0 = static_cast<double>(binomial(2 * p, p));
  const double lead = std::ldexp(1.0, 2 * p + 1) / (n * q0);
  const int half = n / 2;

  // Entries depend on j - j' only, so build one kernel over the offset d.
  std::vector<double> amp(static_cast<std::size_t>(half + 1), 0.0);
  for (int k = 1; k <= half; ++k) {
    const double weight = (k == half) ? 0.5 : 1.0;
    amp[static_cast<std::size_t>(k)] = weight * std::pow(std::sin(k * ds / 2.0), 2 * p);
  }
  std::vector<double> kernel(static_cast<std::size_t>(n), 0.0);
  for (int d = 0; d < n; ++d) {
    const double plus = d + 0.5 + zeta;
    const double minus = d - 0.5 + zeta;
    double acc = 0.0;
    for (int k = 1; k <= half; ++k)
      acc += amp[static_cast<std::size_t>(k)] * (std::cos(k * ds * plus) - std::cos(k * ds * minus));
    kernel[static_cast<std::size_t>(d)] = lead * acc;
  }
  Eigen::MatrixXd s(n, n);
  for (int j = 0; j < n; ++j)
    for (int jp = 0; jp < n; ++jp) s(j, jp) = kernel[static_cast<std::size_t>(wrap(j - jp, n))];
  return PriorTransform(TransformKind::global, n, p, zeta, std::move(s));
}

PriorTransform residual_transform(int n, int p, double zeta) {
  const PriorTransform t = local_transform(n, p);
  const PriorTransform s = concentration_transform(n, p, zeta);
  return PriorTransform(TransformKind::residual, n, p, zeta, t.matrix() - s.matrix());
}

PriorTransform make_transform(TransformKind kind, int n, int p, double zeta) {
  switch (kind) {
    case TransformKind::local: return local_transform(n, p);
    case TransformKind::global: return concentration_transform(n, p, zeta);
    case TransformKind::residual: return residual_transform(n, p, zeta);
  }
  throw std::invalid_argument("unknown transform kind");
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& matrix) {
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      if (j) out << ',';
      out << matrix(i, j);
    }
    out << '\n';
  }
}

SeparableTransform2D::SeparableTransform2D(PriorTransform base) : base_(std::move(base)) {}

Eigen::Index SeparableTransform2D::rows() const {
  const Eigen::Index n = base_.n();
  return 2 * n * n;
}

Eigen::Index SeparableTransform2D::cols() const {
  const Eigen::Index n = base_.n();
  return n * n;
}

Eigen::VectorXd SeparableTransform2D::apply(const Eigen::VectorXd& x) const {
  const int n = base_.n();
  if (x.size() != cols()) throw std::invalid_argument("SeparableTransform2D::apply: size mismatch");
  const auto& b = base_.matrix();
  Eigen::Map<const Eigen::MatrixXd> img(x.data(), n, n);
  Eigen::VectorXd out(rows());
  Eigen::Map<Eigen::MatrixXd> first(out.data(), n, n);
  Eigen::Map<Eigen::MatrixXd> second(out.data() + n * n, n, n);
  first.noalias() = b * img;
  second.noalias() = img * b.transpose();
  return out;
}

Eigen::VectorXd SeparableTransform2D::apply_adjoint(const Eigen::VectorXd& y) const {
  const int n = base_.n();
  if (y.size() != rows()) throw std::invalid_argument("SeparableTransform2D::apply_adjoint: size mismatch");
  const auto& b = base_.matrix();
  Eigen::Map<const Eigen::MatrixXd> first(y.data(), n, n);
  Eigen::Map<const Eigen::MatrixXd> second(y.data() + n * n, n, n);
  Eigen::VectorXd out(cols());
  Eigen::Map<Eigen::MatrixXd> img(out.data(), n, n);
  img.noalias() = b.transpose() * first;
  img.noalias() += second * b;
  return out;
}

Eigen::VectorXd SeparableTransform2D::weighted_column_sq(const Eigen::VectorXd& w) const {
  const int n = base_.n();
  if (w.size() != rows()) throw std::invalid_argument("weighted_column_sq: weight length mismatch");
  const Eigen::MatrixXd b2 = base_.matrix().array().square().matrix();
  Eigen::Map<const Eigen::MatrixXd> w1(w.data(), n, n);
  Eigen::Map<const Eigen::MatrixXd> w2(w.data() + n * n, n, n);
  // Column (a, c) of the first block has entries B(i, a) at pixel (i, c);
  // of the second block B(k, c) at pixel (a, k).
  Eigen::VectorXd out(cols());
  Eigen::Map<Eigen::MatrixXd> res(out.data(), n, n);
  res.noalias() = b2.transpose() * w1;
  res.noalias() += w2 * b2;
  return out;
}

Eigen::MatrixXd SeparableTransform2D::dense() const {
  if (base_.n() > 64) throw std::invalid_argument("dense 2D transform limited to n <= 64");
  return kronecker_stack(base_.matrix());
}

Eigen::MatrixXd kronecker_stack(const Eigen::MatrixXd& base) {
  const Eigen::Index n = base.rows();
  if (base.cols() != n) throw std::invalid_argument("kronecker_stack: base must be square");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(2 * n * n, n * n);
  // I (x) B acts within each column of the image; B (x) I mixes columns.
  for (Eigen::Index c = 0; c < n; ++c) out.block(c * n, c * n, n, n) = base;
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c)
      for (Eigen::Index i = 0; i < n; ++i) out(n * n + r * n + i, c * n + i) = base(r, c);
  return out;
}

}  // namespace rsbl
