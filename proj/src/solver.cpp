#include "rsbl/solver.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <string>

namespace rsbl {

double HyperParams::theta_penalty() const {
  if (convention == GammaConvention::scale) return std::isinf(vartheta) ? 0.0 : 1.0 / vartheta;
  return vartheta;
}

void HyperParams::validate() const {
  if (!(vartheta > 0.0)) throw std::invalid_argument("vartheta must be positive");
  if (!(beta >= 0.5)) throw std::invalid_argument("beta must be >= 1/2");
  if (max_outer_iters < 1) throw std::invalid_argument("max_outer_iters must be >= 1");
  if (!(x_tol > 0.0)) throw std::invalid_argument("x_tol must be positive");
  if (!(cg_tol > 0.0)) throw std::invalid_argument("cg_tol must be positive");
  if (cg_max_iters < 1) throw std::invalid_argument("cg_max_iters must be >= 1");
}

double shape_parameter(const HyperParams& hyper, int L) { return hyper.beta - 1.0 + 0.5 * L; }

namespace {

void require_positive(const Eigen::VectorXd& theta) {
  for (Eigen::Index k = 0; k < theta.size(); ++k)
    if (!(theta[k] > 0.0)) throw std::invalid_argument("theta must be strictly positive");
}

void require_eta(double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("shape parameter eta must be positive");
}

double data_and_prior(const Eigen::VectorXd& x, const Eigen::VectorXd& theta, const Measurement& m,
                      const LinearOperator& transform) {
  const double misfit = (m.model.apply(x) - m.data).squaredNorm();
  const Eigen::VectorXd z = transform.apply(x);
  return 0.5 * m.alpha * misfit + 0.5 * theta.dot(z.cwiseAbs2());
}

double hyper_terms(const Eigen::VectorXd& theta, const HyperParams& hyper, int L) {
  const double eta = shape_parameter(hyper, L);
  return hyper.theta_penalty() * theta.sum() - eta * theta.array().log().sum();
}

double relative_change(const Eigen::VectorXd& next, const Eigen::VectorXd& prev) {
  const double diff = (next - prev).norm();
  const double scale = next.norm();
  if (scale == 0.0) return diff;
  return diff / scale;
}

// Cached pieces of the normal equations for one measurement.
class NormalSystem {
 public:
  NormalSystem(const Measurement& m, const LinearOperator& transform, const HyperParams& hyper)
      : m_(m), transform_(transform), hyper_(hyper) {
    if (m.model.cols() != transform.cols())
      throw std::invalid_argument("forward model and transform disagree on signal length");
    rhs_ = m.alpha * m.model.apply_adjoint(m.data);
    direct_ = m.model.cols() <= hyper.direct_max_dim;
    if (direct_) {
      const Eigen::MatrixXd f = m.model.dense();
      gram_ = m.alpha * (f.transpose() * f);
      phi_ = transform.dense();
    } else {
      fdiag_ = m.alpha * m.model.weighted_column_sq(Eigen::VectorXd::Ones(m.model.rows()));
    }
  }

  XUpdateResult solve(const Eigen::VectorXd& theta, const Eigen::VectorXd* warm) const {
    if (theta.size() != transform_.rows()) throw std::invalid_argument("theta length must equal transform rows");
    for (Eigen::Index k = 0; k < theta.size(); ++k)
      if (!(theta[k] >= 0.0)) throw std::invalid_argument("theta must be nonnegative");
    XUpdateResult out;
    if (direct_) {
      Eigen::MatrixXd a = gram_;
      a.noalias() += phi_.transpose() * theta.asDiagonal() * phi_;
      Eigen::LLT<Eigen::MatrixXd> llt(a);
      if (llt.info() != Eigen::Success)
        throw SolverError("x-update system is singular (forward model and transform share a kernel)");
      out.x = llt.solve(rhs_);
      const double bn = rhs_.norm();
      out.relative_residual = bn > 0.0 ? (a * out.x - rhs_).norm() / bn : 0.0;
      if (!std::isfinite(out.relative_residual) || out.relative_residual > 1e-6)
        throw SolverError("x-update system is numerically singular");
      return out;
    }
    const Eigen::VectorXd diag = fdiag_ + transform_.weighted_column_sq(theta);
    auto apply = [&](const Eigen::VectorXd& v) {
      Eigen::VectorXd r = m_.alpha * m_.model.apply_adjoint(m_.model.apply(v));
      r += transform_.apply_adjoint(theta.cwiseProduct(transform_.apply(v)));
      return r;
    };
    Eigen::VectorXd x0 = warm ? *warm : Eigen::VectorXd::Zero(rhs_.size());
    CgResult cg = preconditioned_cg(apply, rhs_, diag, std::move(x0), hyper_.cg_tol, hyper_.cg_max_iters);
    if (!cg.converged)
      throw SolverError("CG did not converge: relative residual " + std::to_string(cg.relative_residual) +
                        " after " + std::to_string(cg.iterations) + " iterations");
    out.x = std::move(cg.x);
    out.cg_iterations = cg.iterations;
    out.relative_residual = cg.relative_residual;
    return out;
  }

 private:
  const Measurement& m_;
  const LinearOperator& transform_;
  const HyperParams& hyper_;
  Eigen::VectorXd rhs_;
  bool direct_ = false;
  Eigen::MatrixXd gram_;
  Eigen::MatrixXd phi_;
  Eigen::VectorXd fdiag_;
};

}  // namespace

double objective(const std::vector<Eigen::VectorXd>& x, const Eigen::VectorXd& theta, const MeasurementSet& data,
                 const LinearOperator& transform, const HyperParams& hyper) {
  if (static_cast<int>(x.size()) != data.size()) throw std::invalid_argument("one x per measurement required");
  require_positive(theta);
  const int L = data.size();
  require_eta(shape_parameter(hyper, L));
  double g = 0.0;
  for (int l = 0; l < L; ++l) g += data_and_prior(x[l], theta, data.measurements[l], transform);
  return g + hyper_terms(theta, hyper, L);
}

double objective(const Eigen::VectorXd& x, const Eigen::VectorXd& theta, const Measurement& data,
                 const LinearOperator& transform, const HyperParams& hyper) {
  require_positive(theta);
  require_eta(shape_parameter(hyper, 1));
  return data_and_prior(x, theta, data, transform) + hyper_terms(theta, hyper, 1);
}

Eigen::VectorXd theta_update_individual(const LinearOperator& transform, const Eigen::VectorXd& x,
                                        const HyperParams& hyper) {
  return theta_update_mmv(transform, {x}, hyper);
}

Eigen::VectorXd theta_update_mmv(const LinearOperator& transform, const std::vector<Eigen::VectorXd>& x,
                                 const HyperParams& hyper) {
  if (x.empty()) throw std::invalid_argument("theta_update_mmv needs at least one signal");
  const int L = static_cast<int>(x.size());
  const double eta = shape_parameter(hyper, L);
  require_eta(eta);
  Eigen::VectorXd energy = Eigen::VectorXd::Zero(transform.rows());
  for (const auto& xl : x) energy += transform.apply(xl).cwiseAbs2();
  const double c = hyper.theta_penalty();
  return (eta / (0.5 * energy.array() + c)).matrix();
}

XUpdateResult x_update(const Measurement& data, const LinearOperator& transform, const Eigen::VectorXd& theta,
                       const HyperParams& hyper, const Eigen::VectorXd* warm_start) {
  return NormalSystem(data, transform, hyper).solve(theta, warm_start);
}

namespace {

PosteriorResult run_blocks(const MeasurementSet& data, const LinearOperator& transform, const HyperParams& hyper,
                           bool shared) {
  hyper.validate();
  data.validate();
  const int L = data.size();
  if (L == 0) throw std::invalid_argument("no measurements");
  require_eta(shape_parameter(hyper, shared ? L : 1));

  std::vector<NormalSystem> systems;
  systems.reserve(static_cast<std::size_t>(L));
  for (const auto& m : data.measurements) systems.emplace_back(m, transform, hyper);

  const Eigen::Index n = transform.cols();
  const Eigen::Index K = transform.rows();
  std::vector<Eigen::VectorXd> x(static_cast<std::size_t>(L), Eigen::VectorXd::Zero(n));
  std::vector<Eigen::VectorXd> theta(static_cast<std::size_t>(shared ? 1 : L), Eigen::VectorXd::Ones(K));

  auto total_objective = [&]() {
    if (shared) return objective(x, theta[0], data, transform, hyper);
    double g = 0.0;
    for (int l = 0; l < L; ++l) g += objective(x[l], theta[l], data.measurements[l], transform, hyper);
    return g;
  };

  PosteriorResult out;
  for (int it = 1; it <= hyper.max_outer_iters; ++it) {
    double change = 0.0;
    int cg_iters = 0;
    for (int l = 0; l < L; ++l) {
      const Eigen::VectorXd& th = theta[shared ? 0 : l];
      XUpdateResult step = systems[l].solve(th, &x[l]);
      change = std::max(change, relative_change(step.x, x[l]));
      cg_iters += step.cg_iterations;
      x[l] = std::move(step.x);
    }
    out.objective_after_x.push_back(total_objective());
    if (shared) {
      theta[0] = theta_update_mmv(transform, x, hyper);
    } else {
      for (int l = 0; l < L; ++l) theta[l] = theta_update_individual(transform, x[l], hyper);
    }
    out.trace.push_back({it, total_objective(), change, cg_iters});
    out.iters = it;
    if (change < hyper.x_tol) {
      out.converged = true;
      break;
    }
  }
  out.x_map = std::move(x);
  out.theta_map = std::move(theta);
  return out;
}

}  // namespace

PosteriorResult gsbl_run(const Measurement& data, const LinearOperator& transform, const HyperParams& hyper) {
  MeasurementSet set;
  set.measurements.push_back(data);
  return run_blocks(set, transform, hyper, false);
}

PosteriorResult gsbl_run_separate(const MeasurementSet& data, const LinearOperator& transform,
                                  const HyperParams& hyper) {
  return run_blocks(data, transform, hyper, false);
}

PosteriorResult mmv_gsbl_run(const MeasurementSet& data, const LinearOperator& transform, const HyperParams& hyper) {
  return run_blocks(data, transform, hyper, true);
}

void write_trace_csv(std::ostream& out, const std::vector<TraceEntry>& trace) {
  out << "iter,objective,x_change\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& t : trace) out << t.iter << ',' << t.objective << ',' << t.x_change << '\n';
}

}  // namespace rsbl
