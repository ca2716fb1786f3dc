#include "gaussalign/transport.hpp"

#include <cmath>
#include <sstream>

#include "gaussalign/errors.hpp"
#include "gaussalign/spectral.hpp"

namespace gaussalign {

namespace {

void check_same_dim(const Gaussian& g1, const Gaussian& g2, const char* op) {
  if (g1.dim() != g2.dim()) {
    std::ostringstream msg;
    msg << op << ": dimension mismatch (" << g1.dim() << " vs " << g2.dim() << ")";
    throw DimensionError(msg.str());
  }
}

// Eigendecomposition of a PD matrix; throws naming the offending eigenvalue.
SpectralDecomposition require_pd(const Eigen::MatrixXd& m, const char* op) {
  SpectralDecomposition eig = sym_eig(m);
  const Eigen::Index n = eig.eigenvalues.size();
  const double lmax = (n > 0) ? eig.eigenvalues(0) : 0.0;
  const double lmin = (n > 0) ? eig.eigenvalues(n - 1) : 0.0;
  if (n == 0 || lmin <= 1e-10 * std::max(lmax, 0.0)) {
    std::ostringstream msg;
    msg << op << ": covariance is singular (smallest eigenvalue " << lmin << ")";
    throw SingularMatrixError(msg.str());
  }
  return eig;
}

Eigen::MatrixXd apply_power(const SpectralDecomposition& eig, double p) {
  Eigen::VectorXd powered = eig.eigenvalues.array().pow(p);
  return symmetrize(eig.eigenvectors * powered.asDiagonal() *
                    eig.eigenvectors.transpose());
}

}  // namespace

double bw_distance(const Gaussian& g1, const Gaussian& g2) {
  check_same_dim(g1, g2, "bw_distance");
  const Eigen::MatrixXd s1_half = sqrt_psd(g1.cov);
  const Eigen::MatrixXd mid = sqrt_psd(symmetrize(s1_half * g2.cov * s1_half));
  const double trace_term =
      g1.cov.trace() + g2.cov.trace() - 2.0 * mid.trace();
  const double mean_term = (g1.mean - g2.mean).squaredNorm();
  return std::sqrt(mean_term + std::max(trace_term, 0.0));
}

AffineMap bw_map(const Gaussian& g1, const Gaussian& g2) {
  check_same_dim(g1, g2, "bw_map");
  SpectralDecomposition eig1 = require_pd(g1.cov, "bw_map");
  const Eigen::MatrixXd s1_half = apply_power(eig1, 0.5);
  const Eigen::MatrixXd s1_inv_half = apply_power(eig1, -0.5);
  const Eigen::MatrixXd mid = sqrt_psd(symmetrize(s1_half * g2.cov * s1_half));
  AffineMap map;
  map.matrix = symmetrize(s1_inv_half * mid * s1_inv_half);
  map.pivot = g1.mean;
  map.offset = g2.mean;
  return map;
}

Gaussian displacement_interpolation(const Gaussian& g1, const AffineMap& map,
                                    double t) {
  if (t < 0.0 || t > 1.0) {
    std::ostringstream msg;
    msg << "displacement_interpolation: t = " << t << " outside [0, 1]";
    throw RangeError(msg.str());
  }
  if (map.matrix.cols() != g1.dim()) {
    throw DimensionError("displacement_interpolation: map does not fit source");
  }
  const Eigen::MatrixXd blend =
      (1.0 - t) * Eigen::MatrixXd::Identity(map.matrix.rows(), map.matrix.cols()) +
      t * map.matrix;
  Eigen::VectorXd mean = (1.0 - t) * g1.mean + t * map(g1.mean);
  Eigen::MatrixXd cov = symmetrize(blend * g1.cov * blend.transpose());
  return Gaussian{std::move(mean), std::move(cov)};
}

BarycenterResult w2_barycenter_fixed_point(const WeightedCollection& col,
                                           double tol, int max_iters) {
  if (col.size() == 0) {
    throw EmptyInputError("w2_barycenter_fixed_point: empty collection");
  }
  const int d = col.gaussians.front().dim();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < col.size(); ++i) {
    const Gaussian& g = col.gaussians[i];
    if (g.dim() != d) {
      throw DimensionError("w2_barycenter_fixed_point: mixed dimensions");
    }
    require_pd(g.cov, "w2_barycenter_fixed_point");
    mean += col.weights(i) * g.mean;
    sigma += col.weights(i) * g.cov;  // init: weighted arithmetic mean
  }

  double residual = std::numeric_limits<double>::infinity();
  int iter = 0;
  for (; iter < max_iters; ++iter) {
    SpectralDecomposition eig = require_pd(sigma, "w2_barycenter_fixed_point");
    const Eigen::MatrixXd s_half = apply_power(eig, 0.5);
    const Eigen::MatrixXd s_inv_half = apply_power(eig, -0.5);

    Eigen::MatrixXd mixed = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < col.size(); ++i) {
      mixed += col.weights(i) *
               sqrt_psd(symmetrize(s_half * col.gaussians[i].cov * s_half));
    }

    residual = (sigma - mixed).norm() / sigma.norm();
    if (residual <= tol) break;
    sigma = symmetrize(s_inv_half * mixed * mixed * s_inv_half);
  }

  if (residual > tol) {
    std::ostringstream msg;
    msg << "w2_barycenter_fixed_point: no convergence after " << max_iters
        << " iterations (residual " << residual << ")";
    throw ConvergenceError(msg.str(), residual);
  }
  return BarycenterResult{Gaussian{std::move(mean), std::move(sigma)}, residual,
                          iter + 1};
}

}  // namespace gaussalign
