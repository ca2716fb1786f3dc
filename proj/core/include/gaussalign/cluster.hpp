#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "gaussalign/gaussian.hpp"
#include "gaussalign/solver_config.hpp"

namespace gaussalign {

/// Symmetric pairwise distance matrix with zero diagonal.
struct DistanceMatrix {
  Eigen::MatrixXd entries;

  int size() const { return static_cast<int>(entries.rows()); }
};

enum class PairwiseMode { kClosed, kRgd, kUpper, kLower };

/// Pairwise IGW distances. kClosed throws UnsupportedInputError (naming the
/// pair) when no analytic case applies; kRgd derives a per-pair seed from
/// cfg.seed so the fill is independent of evaluation order; kUpper/kLower
/// report the analytic bounds. `threads` caps the parallel fill.
DistanceMatrix pairwise_igw_matrix(const std::vector<Gaussian>& gaussians,
                                   const SolverConfig& cfg,
                                   PairwiseMode mode = PairwiseMode::kClosed,
                                   int threads = 1);

struct ClusterResult {
  std::vector<int> labels;
  std::vector<Gaussian> centers;  // diagonal spectra
  double inertia = 0.0;
  std::uint64_t seed = 0;
  int iterations = 0;
};

/// k-means++ over centered Gaussians under the centered IGW closed form,
/// with cluster centers recomputed as uniform-weight IGW barycenters.
/// Empty clusters are reseeded from the point farthest from its center.
ClusterResult kmeans_igw(const std::vector<Gaussian>& gaussians, int k,
                         std::uint64_t seed, const SolverConfig& cfg);

struct MdsEmbedding {
  Eigen::MatrixXd coordinates;  // n x out_dim
  double negative_mass = 0.0;   // |sum of clamped negative eigenvalues|
};

/// Classical multidimensional scaling: double-center -D^2/2 and keep the top
/// out_dim eigenpairs (negative eigenvalues clamped and reported).
MdsEmbedding classical_mds(const DistanceMatrix& dm, int out_dim);

/// |Yᵀ X|_F^2 / (|Xᵀ X|_F |Yᵀ Y|_F), the Gram-correlation between two
/// embedding sets with one row per shared sample. Columns are mean-centered
/// first only when `center_columns` is set.
double cka(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
           bool center_columns = false);

/// Chance-corrected agreement between two labelings.
double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b);

}  // namespace gaussalign
