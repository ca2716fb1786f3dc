#include "gaussalign/spectral.hpp"

#include <cmath>
#include <sstream>

#include "gaussalign/errors.hpp"

namespace gaussalign {

namespace {

constexpr double kEigClampRel = 1e-10;

void check_square_finite(const Eigen::MatrixXd& m, const char* op) {
  if (m.rows() != m.cols()) {
    std::ostringstream msg;
    msg << op << ": expected a square matrix, got " << m.rows() << "x" << m.cols();
    throw DimensionError(msg.str());
  }
  if (!m.allFinite()) {
    throw InvalidInputError(std::string(op) + ": matrix has non-finite entries");
  }
}

// Make the largest-magnitude entry of each column positive; ties resolved by
// the first index attaining the maximum.
void fix_column_signs(Eigen::MatrixXd& q) {
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    Eigen::Index imax = 0;
    q.col(j).cwiseAbs().maxCoeff(&imax);
    if (q(imax, j) < 0.0) q.col(j) = -q.col(j);
  }
}

// For a run of exactly equal eigenvalues whose eigenspace is a coordinate
// subspace, substitute the identity columns (ascending axis order).
void prefer_identity_blocks(const Eigen::VectorXd& vals, Eigen::MatrixXd& q) {
  const Eigen::Index n = vals.size();
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && vals(end) == vals(start)) ++end;
    const Eigen::Index mult = end - start;
    if (mult > 1) {
      const Eigen::MatrixXd block = q.middleCols(start, mult);
      const Eigen::MatrixXd proj = block * block.transpose();
      bool axis_aligned = true;
      for (Eigen::Index i = 0; i < n && axis_aligned; ++i) {
        for (Eigen::Index j = 0; j < n && axis_aligned; ++j) {
          const double target = (i == j) ? std::round(proj(i, j)) : 0.0;
          if (i == j && target != 0.0 && target != 1.0) axis_aligned = false;
          if (std::abs(proj(i, j) - target) > 1e-12) axis_aligned = false;
        }
      }
      if (axis_aligned) {
        Eigen::Index col = start;
        for (Eigen::Index i = 0; i < n; ++i) {
          if (std::round(proj(i, i)) == 1.0) {
            q.col(col).setZero();
            q(i, col) = 1.0;
            ++col;
          }
        }
      }
    }
    start = end;
  }
}

}  // namespace

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m) {
  return 0.5 * (m + m.transpose());
}

SpectralDecomposition sym_eig(const Eigen::MatrixXd& m) {
  check_square_finite(m, "sym_eig");
  const Eigen::MatrixXd sym = symmetrize(m);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw InvalidInputError("sym_eig: eigendecomposition failed to converge");
  }

  // Eigen sorts ascending; reverse to non-increasing.
  const Eigen::Index n = sym.rows();
  SpectralDecomposition out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    out.eigenvectors.col(j) = solver.eigenvectors().col(n - 1 - j);
  }

  prefer_identity_blocks(out.eigenvalues, out.eigenvectors);
  fix_column_signs(out.eigenvectors);
  return out;
}

Eigen::MatrixXd sqrt_psd(const Eigen::MatrixXd& m) {
  SpectralDecomposition eig = sym_eig(m);
  const Eigen::Index n = eig.eigenvalues.size();
  const double lmax = (n > 0) ? std::max(eig.eigenvalues(0), 0.0) : 0.0;
  // Absolute floor covers pure round-off negatives on near-zero matrices.
  const double clamp_bound = kEigClampRel * lmax + 1e-14;

  Eigen::VectorXd roots(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double lambda = eig.eigenvalues(i);
    if (lambda < -clamp_bound) {
      std::ostringstream msg;
      msg << "sqrt_psd: matrix is not PSD, eigenvalue " << lambda
          << " is below -" << kEigClampRel << " * lmax (lmax = " << lmax << ")";
      throw NotPsdError(msg.str());
    }
    roots(i) = std::sqrt(std::max(lambda, 0.0));
  }
  return symmetrize(eig.eigenvectors * roots.asDiagonal() *
                    eig.eigenvectors.transpose());
}

Eigen::MatrixXd inv_sqrt_psd(const Eigen::MatrixXd& m, double rel_cutoff) {
  SpectralDecomposition eig = sym_eig(m);
  const Eigen::Index n = eig.eigenvalues.size();
  const double lmax = (n > 0) ? std::max(eig.eigenvalues(0), 0.0) : 0.0;
  const double cutoff = rel_cutoff * lmax;

  Eigen::VectorXd inv_roots = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (eig.eigenvalues(i) > cutoff) {
      inv_roots(i) = 1.0 / std::sqrt(eig.eigenvalues(i));
    }
  }
  return symmetrize(eig.eigenvectors * inv_roots.asDiagonal() *
                    eig.eigenvectors.transpose());
}

bool is_psd(const Eigen::MatrixXd& m, double tol) {
  if (tol < 0.0) throw RangeError("is_psd: tolerance must be non-negative");
  SpectralDecomposition eig = sym_eig(m);
  if (eig.eigenvalues.size() == 0) return true;
  const double lmax = eig.eigenvalues(0);
  const double lmin = eig.eigenvalues(eig.eigenvalues.size() - 1);
  return lmin >= -tol * std::max(1.0, lmax);
}

}  // namespace gaussalign
