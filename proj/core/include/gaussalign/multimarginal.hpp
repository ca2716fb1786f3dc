#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "gaussalign/block_gram.hpp"
#include "gaussalign/gaussian.hpp"
#include "gaussalign/solver_config.hpp"

namespace gaussalign {

/// Joint Gaussian coupling of p marginals over the product space, stored as
/// a p x p grid of d x d blocks (diagonal blocks are the marginal
/// covariances).
struct MultiCoupling {
  std::vector<Eigen::VectorXd> means;
  std::vector<std::vector<Eigen::MatrixXd>> blocks;
  double cost = 0.0;
  std::optional<BlockFactor> factor;
  std::optional<SospReport> certificate;
  std::vector<std::string> warnings;

  int marginal_count() const { return static_cast<int>(means.size()); }
  int dim() const {
    return means.empty() ? 0 : static_cast<int>(means.front().size());
  }
  bool certified() const { return certificate && certificate->certified_global; }

  /// Assemble the dp x dp joint covariance.
  Eigen::MatrixXd stacked_cov() const;
};

/// Closed-form multimarginal IGW coupling between centered Gaussians:
/// blocks Q_i Λ_i^{1/2} Λ_j^{1/2} Q_jᵀ after zero-padding to a common
/// dimension; cost is the sum of pairwise squared IGW distances.
MultiCoupling mm_igw_closed_form(const std::vector<Gaussian>& gaussians);

/// Multimarginal quadratic-cost OT by low-rank factorization with rank
/// k = d + 1 (overridable for experiments; 0 means the default). A solution
/// whose optimality certificate fails carries a warning, never silently.
MultiCoupling mm_ot_solve(const std::vector<Gaussian>& gaussians,
                          const SolverConfig& cfg = mmot_rtr_defaults(),
                          int rank_override = 0);

/// Sum of pairwise cross-correlation traces sum_{i<j} tr(C_ij); the quantity
/// maximized by the transport solve.
double mm_ot_objective(const MultiCoupling& coupling);

/// Weighted barycenter read off a multimarginal coupling: the pushforward of
/// the coupling under the weighted coordinate average.
Gaussian barycenter_from_mm(const MultiCoupling& coupling,
                            const Eigen::VectorXd& weights);

}  // namespace gaussalign
