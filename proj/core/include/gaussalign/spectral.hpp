#pragma once

#include <Eigen/Dense>

namespace gaussalign {

/// Eigendecomposition of a symmetric matrix with a deterministic basis.
///
/// Eigenvalues are sorted non-increasing. Eigenvector columns follow the
/// eigenvalue order and are canonicalized: each column's largest-magnitude
/// entry is made positive, and eigenspaces of exactly repeated eigenvalues
/// that span coordinate subspaces are replaced by the identity columns.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;   // non-increasing
  Eigen::MatrixXd eigenvectors;  // orthogonal, columns match eigenvalue order

  Eigen::MatrixXd reconstruct() const {
    return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.transpose();
  }
};

/// Force exact symmetry: (M + Mᵀ)/2.
Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m);

/// Eigendecomposition of a symmetric matrix.
/// Throws InvalidInputError on non-finite entries or non-square input.
SpectralDecomposition sym_eig(const Eigen::MatrixXd& m);

/// Symmetric PSD square root. Eigenvalues in [-1e-10*lmax, 0) are clamped
/// to zero before rooting; anything below that bound raises NotPsdError.
Eigen::MatrixXd sqrt_psd(const Eigen::MatrixXd& m);

/// Moore-Penrose inverse square root on the support: eigenvalues at or below
/// rel_cutoff * lmax are dropped instead of inverted.
Eigen::MatrixXd inv_sqrt_psd(const Eigen::MatrixXd& m, double rel_cutoff = 1e-10);

/// True iff the minimum eigenvalue is >= -tol * max(1, maximum eigenvalue).
bool is_psd(const Eigen::MatrixXd& m, double tol);

}  // namespace gaussalign
