#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "gaussalign/gaussian.hpp"
#include "gaussalign/solver_config.hpp"
#include "gaussalign/stiefel.hpp"
#include "gaussalign/transport.hpp"

namespace gaussalign {

/// Analytic bounds on the squared IGW distance. The gap between the bounds
/// is the Cauchy-Schwarz gap of the moment vectors eta.
struct IgwBounds {
  double xi = 0.0;
  double lower_sq = 0.0;
  double upper_sq = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

/// Result of the quadratic optimization over orthonormal frames.
struct GammaSolution {
  StiefelPoint c;
  double gamma = 0.0;
  std::vector<double> trace;
  bool swapped = false;  // true if arguments were reordered so dim1 >= dim2
};

/// Optimal IGW coupling between two Gaussians: joint Gaussian with the given
/// cross-covariance block and its induced linear alignment map.
struct GaussianCoupling {
  Eigen::VectorXd mean;  // stacked (m1; m2)
  Eigen::MatrixXd cov;   // [[Σ1, K], [Kᵀ, Σ2]]
  Eigen::MatrixXd cross; // K
  AffineMap map;
};

struct IgwRgdResult {
  double distance = 0.0;
  GammaSolution gamma;
  IgwBounds bounds;
  int total_iterations = 0;
};

/// The objective tr(Λ1 C Λ2 Cᵀ) + 2 <Λ1^{1/2} m̃1, C Λ2^{1/2} m̃2>.
/// Arguments are swapped internally when dim(s1) < dim(s2); c must then be
/// dim(s2) x dim(s1).
double gamma_objective(const SpectralForm& s1, const SpectralForm& s2,
                       const StiefelPoint& c);

/// Euclidean gradient of gamma_objective in c (same shape conventions).
Eigen::MatrixXd gamma_objective_grad(const SpectralForm& s1, const SpectralForm& s2,
                                     const Eigen::MatrixXd& c);

IgwBounds igw_bounds(const Gaussian& g1, const Gaussian& g2);

/// Closed-form IGW distance when one of the analytic cases applies, checked
/// in order: both centered, univariate, co-centered (parallel eta vectors
/// with non-negative ratio). Empty otherwise.
std::optional<double> igw_closed_form(const Gaussian& g1, const Gaussian& g2);

/// IGW distance estimate by Riemannian gradient ascent on the gamma problem
/// from the identity init, its first-column sign flip, a mean-aligning
/// Householder init, and cfg.restarts seeded random inits; the best value is
/// kept. The returned distance always lies inside [bounds.lower, bounds.upper].
IgwRgdResult igw_distance_rgd(const Gaussian& g1, const Gaussian& g2,
                              const SolverConfig& cfg = igw_rgd_defaults());

/// Optimal coupling for a given frame c (dim(g1) >= dim(g2) required).
GaussianCoupling igw_coupling(const Gaussian& g1, const Gaussian& g2,
                              const StiefelPoint& c);

/// IGW barycenter of centered Gaussians: diagonal covariance holding the
/// weighted averages of the sorted spectra, truncated at d_target.
Gaussian igw_barycenter(const WeightedCollection& col, int d_target);

}  // namespace gaussalign
