#pragma once

#include "rsbl/forward_models.hpp"
#include "rsbl/linear_operator.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace rsbl {

/// How the gamma hyperprior's second parameter enters the theta terms.
///  scale: density prop. to theta^(beta-1) exp(-theta / vartheta); penalty theta / vartheta.
///  rate:  density prop. to theta^(beta-1) exp(-theta * vartheta); penalty theta * vartheta.
/// Both give theta = eta / (z^2/2 + c) with c = 1/vartheta or c = vartheta.
enum class GammaConvention { scale, rate };

struct HyperParams {
  double beta = 1.0;
  double vartheta = 1e-4;
  GammaConvention convention = GammaConvention::scale;
  int max_outer_iters = 100;
  double x_tol = 1e-6;
  double cg_tol = 1e-8;
  int cg_max_iters = 20000;
  /// Largest system dimension solved by dense Cholesky; CG above this.
  int direct_max_dim = 512;

  /// Coefficient c multiplying theta in the objective.
  double theta_penalty() const;
  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TraceEntry {
  int iter = 0;
  double objective = 0.0;
  double x_change = 0.0;
  int cg_iterations = 0;
};

struct PosteriorResult {
  /// One MAP estimate per measurement.
  std::vector<Eigen::VectorXd> x_map;
  /// One theta per measurement for separate recovery, a single shared one for MMV.
  std::vector<Eigen::VectorXd> theta_map;
  bool converged = false;
  int iters = 0;
  std::vector<TraceEntry> trace;
  /// Objective after the x-step of every sweep, for block-wise descent checks.
  std::vector<double> objective_after_x;
};

/// eta = beta - 1 + L/2 (L = 1 gives beta - 1/2).
double shape_parameter(const HyperParams& hyper, int L);

/// sum_l [alpha_l/2 ||F_l x_l - y_l||^2 + 1/2 ||D^{1/2} Phi x_l||^2] + c sum theta - eta sum log theta
/// with eta = shape_parameter(hyper, L). Throws on nonpositive theta.
double objective(const std::vector<Eigen::VectorXd>& x, const Eigen::VectorXd& theta,
                 const MeasurementSet& data, const LinearOperator& transform, const HyperParams& hyper);
double objective(const Eigen::VectorXd& x, const Eigen::VectorXd& theta, const Measurement& data,
                 const LinearOperator& transform, const HyperParams& hyper);

/// theta_k = (beta - 1/2) / ([Phi x]_k^2 / 2 + c).
Eigen::VectorXd theta_update_individual(const LinearOperator& transform, const Eigen::VectorXd& x,
                                        const HyperParams& hyper);

/// theta_k = (beta - 1 + L/2) / (sum_l [Phi x_l]_k^2 / 2 + c).
Eigen::VectorXd theta_update_mmv(const LinearOperator& transform, const std::vector<Eigen::VectorXd>& x,
                                 const HyperParams& hyper);

struct XUpdateResult {
  Eigen::VectorXd x;
  int cg_iterations = 0;  // 0 for the direct path
  double relative_residual = 0.0;
};

/// Solves (alpha F^T F + Phi^T D_theta Phi) x = alpha F^T y. theta may contain zeros.
/// warm_start seeds CG; ignored on the direct path. Throws SolverError when the
/// system is singular or CG fails to reach hyper.cg_tol within hyper.cg_max_iters.
XUpdateResult x_update(const Measurement& data, const LinearOperator& transform,
                       const Eigen::VectorXd& theta, const HyperParams& hyper,
                       const Eigen::VectorXd* warm_start = nullptr);

/// Jacobi-preconditioned CG on a symmetric positive definite operator.
struct CgResult {
  Eigen::VectorXd x;
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

template <typename ApplyFn>
CgResult preconditioned_cg(const ApplyFn& apply, const Eigen::VectorXd& b, const Eigen::VectorXd& diag,
                           Eigen::VectorXd x0, double tol, int max_iters) {
  CgResult out;
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    out.x = Eigen::VectorXd::Zero(b.size());
    out.converged = true;
    return out;
  }
  Eigen::VectorXd x = std::move(x0);
  if (x.size() != b.size()) x = Eigen::VectorXd::Zero(b.size());
  const Eigen::VectorXd inv_diag = diag.cwiseMax(1e-300).cwiseInverse();
  Eigen::VectorXd r = b - apply(x);
  Eigen::VectorXd z = inv_diag.cwiseProduct(r);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  int it = 0;
  double rel = r.norm() / bnorm;
  while (rel > tol && it < max_iters) {
    const Eigen::VectorXd ap = apply(p);
    const double pap = p.dot(ap);
    if (!(pap > 0.0)) break;
    const double step = rz / pap;
    x += step * p;
    r -= step * ap;
    z = inv_diag.cwiseProduct(r);
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
    ++it;
    rel = r.norm() / bnorm;
  }
  out.x = std::move(x);
  out.iterations = it;
  out.relative_residual = rel;
  out.converged = rel <= tol;
  return out;
}

/// Single-measurement GSBL: theta = 1, x = 0, then alternate x- and theta-updates
/// until max relative x change < x_tol or max_outer_iters sweeps.
PosteriorResult gsbl_run(const Measurement& data, const LinearOperator& transform, const HyperParams& hyper);

/// Independent GSBL on every member of the set, iterated in lockstep until all
/// members meet the stopping rule.
PosteriorResult gsbl_run_separate(const MeasurementSet& data, const LinearOperator& transform,
                                  const HyperParams& hyper);

/// Joint recovery with one shared theta across all measurements.
PosteriorResult mmv_gsbl_run(const MeasurementSet& data, const LinearOperator& transform,
                             const HyperParams& hyper);

/// CSV with header iter,objective,x_change.
void write_trace_csv(std::ostream& out, const std::vector<TraceEntry>& trace);

}  // namespace rsbl
