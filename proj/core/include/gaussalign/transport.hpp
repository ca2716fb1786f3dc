#pragma once

#include <Eigen/Dense>

#include "gaussalign/gaussian.hpp"

namespace gaussalign {

/// Affine transport map T(x) = matrix * (x - pivot) + offset.
struct AffineMap {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd pivot;
  Eigen::VectorXd offset;

  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const {
    return matrix * (x - pivot) + offset;
  }
};

/// 2-Wasserstein distance between Gaussians:
/// sqrt(|m1-m2|^2 + tr(S1 + S2 - 2 (S1^{1/2} S2 S1^{1/2})^{1/2})).
double bw_distance(const Gaussian& g1, const Gaussian& g2);

/// Optimal transport map from g1 to g2 under quadratic cost. Requires a
/// positive definite source covariance. The map coefficient is symmetric PSD.
AffineMap bw_map(const Gaussian& g1, const Gaussian& g2);

/// Pushforward of g1 under (1-t) Id + t T, in closed form.
Gaussian displacement_interpolation(const Gaussian& g1, const AffineMap& map,
                                    double t);

struct BarycenterResult {
  Gaussian barycenter;
  double residual;  // relative fixed-point residual at return
  int iterations;
};

/// 2-Wasserstein barycenter by fixed-point iteration on the covariance.
/// All input covariances must be positive definite.
BarycenterResult w2_barycenter_fixed_point(const WeightedCollection& col,
                                           double tol = 1e-10,
                                           int max_iters = 500);

}  // namespace gaussalign
