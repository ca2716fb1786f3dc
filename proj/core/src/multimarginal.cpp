#include "gaussalign/multimarginal.hpp"

#include <cmath>
#include <sstream>

#include "gaussalign/errors.hpp"
#include "gaussalign/spectral.hpp"

namespace gaussalign {

namespace {

constexpr double kCenteredTol = 1e-12;

// Gauge-fix the factor under the right-orthogonal action: multiply by the
// right singular basis and make each column's largest entry positive.
BlockFactor canonicalize_factor(const BlockFactor& u) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(u.stacked(), Eigen::ComputeThinV);
  const Eigen::MatrixXd v = svd.matrixV();
  BlockFactor out;
  out.rank_k = u.rank_k;
  out.blocks.resize(u.blocks.size());
  for (std::size_t i = 0; i < u.blocks.size(); ++i) out.blocks[i] = u.blocks[i] * v;

  Eigen::MatrixXd stacked = out.stacked();
  for (Eigen::Index j = 0; j < stacked.cols(); ++j) {
    Eigen::Index imax = 0;
    stacked.col(j).cwiseAbs().maxCoeff(&imax);
    if (stacked(imax, j) < 0.0) {
      for (auto& b : out.blocks) b.col(j) = -b.col(j);
    }
  }
  return out;
}

}  // namespace

Eigen::MatrixXd MultiCoupling::stacked_cov() const {
  const int p = marginal_count();
  const int d = dim();
  Eigen::MatrixXd out(static_cast<Eigen::Index>(p) * d, static_cast<Eigen::Index>(p) * d);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      out.block(static_cast<Eigen::Index>(i) * d, static_cast<Eigen::Index>(j) * d, d, d) =
          blocks[i][j];
    }
  }
  return out;
}

MultiCoupling mm_igw_closed_form(const std::vector<Gaussian>& gaussians) {
  if (gaussians.empty()) throw EmptyInputError("mm_igw_closed_form: no measures");
  int d = 0;
  for (const Gaussian& g : gaussians) {
    if (!g.centered(kCenteredTol)) {
      throw UnsupportedInputError(
          "mm_igw_closed_form: only centered inputs are supported");
    }
    d = std::max(d, g.dim());
  }

  const int p = static_cast<int>(gaussians.size());
  std::vector<SpectralForm> forms;
  forms.reserve(p);
  for (const Gaussian& g : gaussians) forms.push_back(spectral_form(pad_to_dim(g, d)));

  MultiCoupling out;
  out.means.resize(p, Eigen::VectorXd::Zero(d));
  out.blocks.assign(p, std::vector<Eigen::MatrixXd>(p));
  double cost = 0.0;
  for (int i = 0; i < p; ++i) {
    out.blocks[i][i] = forms[i].q * forms[i].lambdas.asDiagonal() * forms[i].q.transpose();
    for (int j = i + 1; j < p; ++j) {
      Eigen::MatrixXd cross = forms[i].q * forms[i].lambdas.cwiseSqrt().asDiagonal() *
                              forms[j].lambdas.cwiseSqrt().asDiagonal() *
                              forms[j].q.transpose();
      cost += forms[i].lambdas.squaredNorm() + forms[j].lambdas.squaredNorm() -
              2.0 * cross.squaredNorm();
      out.blocks[i][j] = cross;
      out.blocks[j][i] = cross.transpose();
    }
  }
  out.cost = cost;
  return out;
}

MultiCoupling mm_ot_solve(const std::vector<Gaussian>& gaussians,
                          const SolverConfig& cfg, int rank_override) {
  if (gaussians.empty()) throw EmptyInputError("mm_ot_solve: no measures");
  const int p = static_cast<int>(gaussians.size());
  const int d = gaussians.front().dim();
  std::vector<Eigen::MatrixXd> sigmas;
  sigmas.reserve(p);
  for (const Gaussian& g : gaussians) {
    if (g.dim() != d) {
      throw DimensionError("mm_ot_solve: all marginals must share one dimension");
    }
    sigmas.push_back(g.cov);
  }
  const int k = rank_override > 0 ? rank_override : d + 1;

  BlockGramManifold manifold(sigmas, k);
  const BlockObjective objective = cross_correlation_objective();
  RtrResult run = rtr_minimize(manifold, objective, manifold.aligned_point(), cfg);

  MultiCoupling out;
  out.factor = canonicalize_factor(run.point);
  out.certificate = run.report;
  out.means.reserve(p);
  for (const Gaussian& g : gaussians) out.means.push_back(g.mean);

  out.blocks.assign(p, std::vector<Eigen::MatrixXd>(p));
  double cost = 0.0;
  for (int i = 0; i < p; ++i) {
    out.blocks[i][i] = gaussians[i].cov;
    for (int j = i + 1; j < p; ++j) {
      Eigen::MatrixXd cross = out.factor->blocks[i] * out.factor->blocks[j].transpose();
      cost += (gaussians[i].mean - gaussians[j].mean).squaredNorm() +
              gaussians[i].cov.trace() + gaussians[j].cov.trace() - 2.0 * cross.trace();
      out.blocks[i][j] = cross;
      out.blocks[j][i] = cross.transpose();
    }
  }
  out.cost = cost;

  if (!run.report.certified_global) {
    std::ostringstream msg;
    msg << "global optimality not certified (grad_norm " << run.report.grad_norm
        << ", hess_min_eig_estimate " << run.report.hess_min_eig_estimate
        << ", factor_rank " << run.report.factor_rank << " of k = " << k << ")";
    out.warnings.push_back(msg.str());
  }
  return out;
}

double mm_ot_objective(const MultiCoupling& coupling) {
  const int p = coupling.marginal_count();
  double total = 0.0;
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) total += coupling.blocks[i][j].trace();
  }
  return total;
}

Gaussian barycenter_from_mm(const MultiCoupling& coupling,
                            const Eigen::VectorXd& weights) {
  const int p = coupling.marginal_count();
  if (weights.size() != p) {
    std::ostringstream msg;
    msg << "barycenter_from_mm: " << weights.size() << " weights for " << p
        << " marginals";
    throw InvalidInputError(msg.str());
  }
  if ((weights.array() < 0.0).any() || std::abs(weights.sum() - 1.0) > 1e-12) {
    throw InvalidInputError(
        "barycenter_from_mm: weights must be non-negative and sum to 1");
  }

  const int d = coupling.dim();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
  for (int i = 0; i < p; ++i) mean += weights(i) * coupling.means[i];

  Eigen::MatrixXd cov;
  if (coupling.factor) {
    Eigen::MatrixXd avg =
        Eigen::MatrixXd::Zero(d, coupling.factor->rank_k);
    for (int i = 0; i < p; ++i) avg += weights(i) * coupling.factor->blocks[i];
    cov = avg * avg.transpose();
  } else {
    cov = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < p; ++i) {
      for (int j = 0; j < p; ++j) {
        cov += weights(i) * weights(j) * coupling.blocks[i][j];
      }
    }
  }
  return Gaussian{std::move(mean), symmetrize(cov)};
}

}  // namespace gaussalign
