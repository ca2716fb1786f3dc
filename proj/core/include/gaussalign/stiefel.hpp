#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "gaussalign/solver_config.hpp"

namespace gaussalign {

/// A point on St(d1, d2) = {C in R^{d1 x d2} : CᵀC = I}.
struct StiefelPoint {
  Eigen::MatrixXd matrix;

  int rows() const { return static_cast<int>(matrix.rows()); }
  int cols() const { return static_cast<int>(matrix.cols()); }
  double feasibility_error() const;
};

/// Objective with Euclidean gradient. If grad_out is non-null it receives
/// the Euclidean gradient at c; the return value is f(c). Must be pure.
using StiefelObjective =
    std::function<double(const Eigen::MatrixXd& c, Eigen::MatrixXd* grad_out)>;

/// Tangent projection at c: g - c sym(cᵀ g).
Eigen::MatrixXd stiefel_tangent_project(const Eigen::MatrixXd& c,
                                        const Eigen::MatrixXd& ambient);

/// QR retraction with the R diagonal forced positive.
Eigen::MatrixXd stiefel_retract_qr(const Eigen::MatrixXd& m);

/// QR of a seeded standard-normal matrix.
StiefelPoint random_stiefel(int d1, int d2, std::uint64_t seed);

struct RgdResult {
  StiefelPoint point;
  double value = 0.0;
  std::vector<double> trace;  // accepted objective values, non-decreasing
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;  // gradient norm below tolerance
};

/// Riemannian gradient ascent with backtracking line search and QR
/// retraction. Stops when the Riemannian gradient norm drops below
/// cfg.grad_tol or the iteration budget is exhausted.
RgdResult rgd_maximize(const StiefelObjective& objective,
                       const StiefelPoint& init, const SolverConfig& cfg);

}  // namespace gaussalign
