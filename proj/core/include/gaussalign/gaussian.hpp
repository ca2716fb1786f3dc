#pragma once

#include <Eigen/Dense>
#include <vector>

namespace gaussalign {

/// Default tolerance for covariance PSD checks.
inline constexpr double kCovPsdTol = 1e-8;

/// Default ridge added to fitted covariances.
inline constexpr double kDefaultRidge = 1e-6;

/// A Gaussian measure N(mean, cov) on R^d.
struct Gaussian {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;  // symmetric PSD, d x d

  int dim() const { return static_cast<int>(mean.size()); }
  bool centered(double tol = 1e-12) const { return mean.norm() <= tol; }
};

/// Validate invariants (finite, shapes match, cov symmetric PSD) and return
/// the Gaussian with an exactly symmetrized covariance. Throws on violation.
Gaussian make_gaussian(Eigen::VectorXd mean, Eigen::MatrixXd cov);

/// Eigenbasis view of a Gaussian: cov = Q diag(lambdas) Qᵀ with lambdas
/// sorted non-increasing, m_tilde = Qᵀ mean, eta = diag(sqrt(lambdas)) m_tilde.
struct SpectralForm {
  Eigen::VectorXd lambdas;
  Eigen::MatrixXd q;
  Eigen::VectorXd m_tilde;
  Eigen::VectorXd eta;

  int dim() const { return static_cast<int>(lambdas.size()); }
};

/// A finite weighted family of Gaussians; weights non-negative, sum 1
/// within 1e-12.
struct WeightedCollection {
  std::vector<Gaussian> gaussians;
  Eigen::VectorXd weights;

  int size() const { return static_cast<int>(gaussians.size()); }
};

WeightedCollection make_weighted_collection(std::vector<Gaussian> gaussians,
                                            Eigen::VectorXd weights);

/// Uniform weights over the given measures.
WeightedCollection make_uniform_collection(std::vector<Gaussian> gaussians);

/// Fit by moment matching: mean = sample average, cov = population covariance
/// (divide by n) + ridge * I. Samples are the rows of `samples`.
Gaussian fit_gaussian(const Eigen::MatrixXd& samples, double ridge = kDefaultRidge);

SpectralForm spectral_form(const Gaussian& g);

/// Embed into R^{d_target} by zero-padding the mean and block-embedding the
/// covariance. The spectrum gains only zeros, so centered IGW values are
/// unchanged.
Gaussian pad_to_dim(const Gaussian& g, int d_target);

/// Sorted covariance spectrum zero-padded to length d_target (>= dim).
Eigen::VectorXd padded_spectrum(const Gaussian& g, int d_target);

}  // namespace gaussalign
