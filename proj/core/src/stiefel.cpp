#include "gaussalign/stiefel.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "gaussalign/errors.hpp"

namespace gaussalign {

namespace {
constexpr double kFeasTol = 1e-8;
constexpr double kMinStep = 1e-16;
}  // namespace

double StiefelPoint::feasibility_error() const {
  const Eigen::MatrixXd gram = matrix.transpose() * matrix;
  return (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).norm();
}

Eigen::MatrixXd stiefel_tangent_project(const Eigen::MatrixXd& c,
                                        const Eigen::MatrixXd& ambient) {
  const Eigen::MatrixXd ctg = c.transpose() * ambient;
  return ambient - 0.5 * c * (ctg + ctg.transpose());
}

Eigen::MatrixXd stiefel_retract_qr(const Eigen::MatrixXd& m) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  Eigen::MatrixXd q = qr.householderQ() *
                      Eigen::MatrixXd::Identity(m.rows(), m.cols());
  const Eigen::MatrixXd r =
      qr.matrixQR().topRows(m.cols()).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

StiefelPoint random_stiefel(int d1, int d2, std::uint64_t seed) {
  if (d1 < d2 || d2 < 1) {
    throw DimensionError("random_stiefel: need d1 >= d2 >= 1");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(d1, d2);
  for (int i = 0; i < d1; ++i) {
    for (int j = 0; j < d2; ++j) m(i, j) = normal(rng);
  }
  return StiefelPoint{stiefel_retract_qr(m)};
}

RgdResult rgd_maximize(const StiefelObjective& objective,
                       const StiefelPoint& init, const SolverConfig& cfg) {
  cfg.validate();
  if (init.rows() < init.cols() || init.cols() < 1) {
    throw DimensionError("rgd_maximize: init must be d1 x d2 with d1 >= d2 >= 1");
  }
  if (init.feasibility_error() > kFeasTol) {
    std::ostringstream msg;
    msg << "rgd_maximize: init violates CᵀC = I (error "
        << init.feasibility_error() << ")";
    throw ConstraintError(msg.str());
  }

  RgdResult res;
  Eigen::MatrixXd c = init.matrix;
  Eigen::MatrixXd egrad;
  double value = objective(c, &egrad);
  res.trace.push_back(value);

  double trial_step = cfg.step_init;
  int consecutive_full = 0;

  int iter = 0;
  for (; iter < cfg.max_iters; ++iter) {
    const Eigen::MatrixXd grad = stiefel_tangent_project(c, egrad);
    res.grad_norm = grad.norm();
    if (res.grad_norm < cfg.grad_tol) {
      res.converged = true;
      break;
    }

    // Backtrack until the objective does not decrease.
    double step = trial_step;
    bool accepted = false;
    Eigen::MatrixXd c_next;
    double value_next = value;
    while (step >= kMinStep) {
      c_next = stiefel_retract_qr(c + step * grad);
      value_next = objective(c_next, nullptr);
      if (value_next >= value) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // numerically flat along the gradient

    if (step == trial_step) {
      if (++consecutive_full >= 2) {
        trial_step *= 2.0;
        consecutive_full = 0;
      }
    } else {
      consecutive_full = 0;
      trial_step = std::max(step, kMinStep);
    }

    c = c_next;
    value = objective(c, &egrad);
    res.trace.push_back(value);
  }

  if (!res.converged) {
    const Eigen::MatrixXd grad = stiefel_tangent_project(c, egrad);
    res.grad_norm = grad.norm();
    res.converged = res.grad_norm < cfg.grad_tol;
  }
  res.point = StiefelPoint{std::move(c)};
  res.value = value;
  res.iterations = iter;
  return res;
}

}  // namespace gaussalign
