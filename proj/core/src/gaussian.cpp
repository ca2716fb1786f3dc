#include "gaussalign/gaussian.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "gaussalign/errors.hpp"
#include "gaussalign/spectral.hpp"

namespace gaussalign {

Gaussian make_gaussian(Eigen::VectorXd mean, Eigen::MatrixXd cov) {
  if (!mean.allFinite() || !cov.allFinite()) {
    throw InvalidInputError("make_gaussian: non-finite entries");
  }
  if (cov.rows() != cov.cols()) {
    throw DimensionError("make_gaussian: covariance must be square");
  }
  if (mean.size() != cov.rows()) {
    std::ostringstream msg;
    msg << "make_gaussian: mean length " << mean.size()
        << " does not match covariance dimension " << cov.rows();
    throw DimensionError(msg.str());
  }
  Eigen::MatrixXd sym = symmetrize(cov);
  if (!is_psd(sym, kCovPsdTol)) {
    throw NotPsdError("make_gaussian: covariance is not PSD within tolerance");
  }
  return Gaussian{std::move(mean), std::move(sym)};
}

WeightedCollection make_weighted_collection(std::vector<Gaussian> gaussians,
                                            Eigen::VectorXd weights) {
  if (gaussians.empty()) {
    throw EmptyInputError("make_weighted_collection: no measures");
  }
  if (weights.size() != static_cast<Eigen::Index>(gaussians.size())) {
    throw DimensionError("make_weighted_collection: weight count mismatch");
  }
  if ((weights.array() < 0.0).any()) {
    throw InvalidInputError("make_weighted_collection: negative weight");
  }
  if (std::abs(weights.sum() - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg << "make_weighted_collection: weights sum to " << weights.sum()
        << ", expected 1 within 1e-12";
    throw InvalidInputError(msg.str());
  }
  return WeightedCollection{std::move(gaussians), std::move(weights)};
}

WeightedCollection make_uniform_collection(std::vector<Gaussian> gaussians) {
  const int n = static_cast<int>(gaussians.size());
  if (n == 0) throw EmptyInputError("make_uniform_collection: no measures");
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / n);
  // Exact sum-to-one for n that do not divide 1 evenly.
  w(n - 1) = 1.0 - w.head(n - 1).sum();
  return WeightedCollection{std::move(gaussians), std::move(w)};
}

Gaussian fit_gaussian(const Eigen::MatrixXd& samples, double ridge) {
  const Eigen::Index n = samples.rows();
  const Eigen::Index d = samples.cols();
  if (n == 0 || d == 0) {
    throw EmptyInputError("fit_gaussian: empty sample matrix");
  }
  if (!samples.allFinite()) {
    throw InvalidInputError("fit_gaussian: samples contain non-finite values");
  }
  if (ridge < 0.0) {
    throw RangeError("fit_gaussian: ridge must be non-negative");
  }

  Eigen::VectorXd mean = samples.colwise().mean();
  Eigen::MatrixXd centered = samples.rowwise() - mean.transpose();
  Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n);
  cov.diagonal().array() += ridge;
  return make_gaussian(std::move(mean), std::move(cov));
}

SpectralForm spectral_form(const Gaussian& g) {
  SpectralDecomposition eig = sym_eig(g.cov);
  SpectralForm form;
  form.lambdas = eig.eigenvalues.cwiseMax(0.0);
  form.q = eig.eigenvectors;
  form.m_tilde = form.q.transpose() * g.mean;
  form.eta = form.lambdas.cwiseSqrt().cwiseProduct(form.m_tilde);
  return form;
}

Gaussian pad_to_dim(const Gaussian& g, int d_target) {
  const int d = g.dim();
  if (d_target < d) {
    std::ostringstream msg;
    msg << "pad_to_dim: target dimension " << d_target
        << " is smaller than input dimension " << d;
    throw DimensionError(msg.str());
  }
  if (d_target == d) return g;

  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d_target);
  mean.head(d) = g.mean;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d_target, d_target);
  cov.topLeftCorner(d, d) = g.cov;
  return Gaussian{std::move(mean), std::move(cov)};
}

Eigen::VectorXd padded_spectrum(const Gaussian& g, int d_target) {
  if (d_target < g.dim()) {
    throw DimensionError("padded_spectrum: target dimension too small");
  }
  SpectralDecomposition eig = sym_eig(g.cov);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(d_target);
  out.head(g.dim()) = eig.eigenvalues.cwiseMax(0.0);
  return out;
}

}  // namespace gaussalign
