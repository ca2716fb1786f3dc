#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "gaussalign/solver_config.hpp"

namespace gaussalign {

/// Stacked factor U = (U_1; ...; U_p), each block d x k with U_i U_iᵀ = Σ_i.
struct BlockFactor {
  std::vector<Eigen::MatrixXd> blocks;
  int rank_k = 0;

  int block_count() const { return static_cast<int>(blocks.size()); }
  int block_dim() const {
    return blocks.empty() ? 0 : static_cast<int>(blocks.front().rows());
  }
  /// Blocks stacked vertically into a (d*p) x k matrix.
  Eigen::MatrixXd stacked() const;
};

/// Tangent/ambient vectors share the block layout of BlockFactor.
using BlockVector = std::vector<Eigen::MatrixXd>;

/// First- and second-order stationarity report for a factor point.
struct SospReport {
  double grad_norm = 0.0;
  double hess_min_eig_estimate = 0.0;
  int factor_rank = 0;
  bool certified_global = false;
};

/// Objective on the stacked factor with Euclidean derivatives. The Hessian
/// callback must apply the (constant, for the bilinear cost) Euclidean
/// Hessian to an ambient block vector.
struct BlockObjective {
  std::function<double(const BlockFactor&)> value;
  std::function<BlockVector(const BlockFactor&)> euclidean_grad;
  std::function<BlockVector(const BlockFactor&, const BlockVector&)> euclidean_hess_vec;
};

/// The multimarginal transport cost -sum_{i<j} tr(U_i U_jᵀ).
BlockObjective cross_correlation_objective();

/// The manifold {U : U_i U_iᵀ = Σ_i} with Σ_i ≻ 0, embedded in R^{dp x k}.
/// Per-block eigendecompositions are precomputed once; all operations are
/// pure given the construction.
class BlockGramManifold {
 public:
  BlockGramManifold(std::vector<Eigen::MatrixXd> sigmas, int rank_k);

  int block_count() const { return static_cast<int>(sigmas_.size()); }
  int block_dim() const { return d_; }
  int rank_k() const { return k_; }
  const Eigen::MatrixXd& sigma(int i) const { return sigmas_[i]; }

  /// Relative Frobenius error of the worst block constraint.
  double feasibility_error(const BlockFactor& u) const;

  /// Orthogonal projection of an ambient block vector onto the tangent space
  /// at u: V_i - S_i U_i with S_i Σ_i + Σ_i S_i = V_i U_iᵀ + U_i V_iᵀ.
  BlockVector project_tangent(const BlockFactor& u, const BlockVector& ambient) const;

  /// Metric projection retraction: U_i + V_i -> Σ_i^{1/2} * polar factor.
  BlockFactor retract(const BlockFactor& u, const BlockVector& v) const;

  /// Riemannian gradient of the objective at u.
  BlockVector riemannian_grad(const BlockObjective& obj, const BlockFactor& u) const;

  /// Riemannian Hessian-vector product: projected directional derivative of
  /// the gradient field along tangent v.
  BlockVector riemannian_hess_vec(const BlockObjective& obj, const BlockFactor& u,
                                  const BlockVector& v) const;

  /// Deterministic feasible point: U_i = Σ_i^{1/2} [I 0].
  BlockFactor aligned_point() const;

  /// Feasible point with a seeded Haar-orthonormal row frame per block.
  BlockFactor random_point(std::uint64_t seed) const;

  static double inner(const BlockVector& a, const BlockVector& b);
  static double norm(const BlockVector& a);

 private:
  std::vector<Eigen::MatrixXd> sigmas_;
  std::vector<Eigen::MatrixXd> eigvecs_;       // Q_i
  std::vector<Eigen::VectorXd> eigvals_;       // λ_i, non-increasing
  std::vector<Eigen::MatrixXd> sqrt_sigmas_;   // Σ_i^{1/2}
  std::vector<Eigen::MatrixXd> inv_sqrt_sigmas_;
  int d_ = 0;
  int k_ = 0;

  /// Solve S Σ_i + Σ_i S = rhs (rhs symmetric) in the eigenbasis of Σ_i.
  Eigen::MatrixXd solve_sylvester(int i, const Eigen::MatrixXd& rhs) const;
};

struct RtrResult {
  BlockFactor point;
  double value = 0.0;
  SospReport report;
  std::vector<double> trace;  // accepted objective values, non-increasing
  int iterations = 0;
  int escapes_used = 0;
  bool converged = false;  // gradient tolerance reached
};

/// Riemannian trust-region minimization with truncated CG inner solves.
/// When the gradient is small but the Hessian estimate has an eigenvalue
/// below -grad_tol, a perturbed restart along the negative-curvature
/// direction is attempted up to cfg.restarts times.
RtrResult rtr_minimize(const BlockGramManifold& manifold, const BlockObjective& obj,
                       const BlockFactor& init, const SolverConfig& cfg);

/// Stationarity and rank certificate at a feasible point, for the
/// cross-correlation objective unless another is supplied.
SospReport check_sosp(const BlockGramManifold& manifold, const BlockFactor& point,
                      double tol, const BlockObjective* objective = nullptr,
                      std::uint64_t seed = 0x5eed);

}  // namespace gaussalign
