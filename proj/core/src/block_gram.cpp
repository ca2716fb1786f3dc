#include "gaussalign/block_gram.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "gaussalign/errors.hpp"
#include "gaussalign/spectral.hpp"

namespace gaussalign {

namespace {

constexpr double kFeasTol = 1e-8;

// Orthonormal-row polar factor of a full-row-rank d x k matrix via thin SVD.
Eigen::MatrixXd polar_rows(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().transpose();
}

BlockVector add_scaled(const BlockVector& a, double s, const BlockVector& b) {
  BlockVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + s * b[i];
  return out;
}

}  // namespace

Eigen::MatrixXd BlockFactor::stacked() const {
  const int p = block_count();
  const int d = block_dim();
  Eigen::MatrixXd out(static_cast<Eigen::Index>(p) * d, rank_k);
  for (int i = 0; i < p; ++i) out.middleRows(static_cast<Eigen::Index>(i) * d, d) = blocks[i];
  return out;
}

BlockObjective cross_correlation_objective() {
  BlockObjective obj;
  // -sum_{i<j} tr(U_i U_jᵀ) = -(|sum U_i|_F^2 - sum |U_i|_F^2)/2.
  obj.value = [](const BlockFactor& u) {
    Eigen::MatrixXd total = Eigen::MatrixXd::Zero(u.block_dim(), u.rank_k);
    double self = 0.0;
    for (const auto& b : u.blocks) {
      total += b;
      self += b.squaredNorm();
    }
    return -0.5 * (total.squaredNorm() - self);
  };
  obj.euclidean_grad = [](const BlockFactor& u) {
    Eigen::MatrixXd total = Eigen::MatrixXd::Zero(u.block_dim(), u.rank_k);
    for (const auto& b : u.blocks) total += b;
    BlockVector grad(u.blocks.size());
    for (std::size_t i = 0; i < u.blocks.size(); ++i) grad[i] = u.blocks[i] - total;
    return grad;
  };
  obj.euclidean_hess_vec = [](const BlockFactor& u, const BlockVector& v) {
    Eigen::MatrixXd total = Eigen::MatrixXd::Zero(u.block_dim(), u.rank_k);
    for (const auto& b : v) total += b;
    BlockVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] - total;
    return out;
  };
  return obj;
}

BlockGramManifold::BlockGramManifold(std::vector<Eigen::MatrixXd> sigmas, int rank_k)
    : sigmas_(std::move(sigmas)), k_(rank_k) {
  if (sigmas_.empty()) throw EmptyInputError("BlockGramManifold: no blocks");
  d_ = static_cast<int>(sigmas_.front().rows());
  if (k_ < d_) {
    std::ostringstream msg;
    msg << "BlockGramManifold: rank k = " << k_ << " below block dimension " << d_;
    throw DimensionError(msg.str());
  }
  eigvecs_.reserve(sigmas_.size());
  eigvals_.reserve(sigmas_.size());
  sqrt_sigmas_.reserve(sigmas_.size());
  inv_sqrt_sigmas_.reserve(sigmas_.size());
  for (std::size_t i = 0; i < sigmas_.size(); ++i) {
    if (sigmas_[i].rows() != d_ || sigmas_[i].cols() != d_) {
      throw DimensionError("BlockGramManifold: blocks of mixed dimension");
    }
    sigmas_[i] = symmetrize(sigmas_[i]);
    SpectralDecomposition eig = sym_eig(sigmas_[i]);
    const double lmax = eig.eigenvalues(0);
    const double lmin = eig.eigenvalues(d_ - 1);
    if (lmin <= 1e-10 * std::max(lmax, 0.0)) {
      std::ostringstream msg;
      msg << "BlockGramManifold: Σ_" << i << " is not positive definite "
          << "(smallest eigenvalue " << lmin << ")";
      throw NotPsdError(msg.str());
    }
    Eigen::VectorXd roots = eig.eigenvalues.cwiseSqrt();
    sqrt_sigmas_.push_back(symmetrize(eig.eigenvectors * roots.asDiagonal() *
                                      eig.eigenvectors.transpose()));
    inv_sqrt_sigmas_.push_back(symmetrize(eig.eigenvectors *
                                          roots.cwiseInverse().asDiagonal() *
                                          eig.eigenvectors.transpose()));
    eigvecs_.push_back(eig.eigenvectors);
    eigvals_.push_back(eig.eigenvalues);
  }
}

double BlockGramManifold::feasibility_error(const BlockFactor& u) const {
  if (u.block_count() != block_count() || u.block_dim() != d_ || u.rank_k != k_) {
    throw DimensionError("BlockGramManifold: factor shape mismatch");
  }
  double worst = 0.0;
  for (int i = 0; i < block_count(); ++i) {
    const double err =
        (u.blocks[i] * u.blocks[i].transpose() - sigmas_[i]).norm() / sigmas_[i].norm();
    worst = std::max(worst, err);
  }
  return worst;
}

Eigen::MatrixXd BlockGramManifold::solve_sylvester(int i, const Eigen::MatrixXd& rhs) const {
  const Eigen::MatrixXd& q = eigvecs_[i];
  const Eigen::VectorXd& lam = eigvals_[i];
  Eigen::MatrixXd r = q.transpose() * rhs * q;
  for (int a = 0; a < d_; ++a) {
    for (int b = 0; b < d_; ++b) r(a, b) /= lam(a) + lam(b);
  }
  return q * r * q.transpose();
}

BlockVector BlockGramManifold::project_tangent(const BlockFactor& u,
                                               const BlockVector& ambient) const {
  BlockVector out(ambient.size());
  for (int i = 0; i < block_count(); ++i) {
    const Eigen::MatrixXd rhs = symmetrize(ambient[i] * u.blocks[i].transpose()) * 2.0;
    const Eigen::MatrixXd s = solve_sylvester(i, rhs);
    out[i] = ambient[i] - s * u.blocks[i];
  }
  return out;
}

BlockFactor BlockGramManifold::retract(const BlockFactor& u, const BlockVector& v) const {
  BlockFactor out;
  out.rank_k = k_;
  out.blocks.resize(u.blocks.size());
  for (int i = 0; i < block_count(); ++i) {
    out.blocks[i] = sqrt_sigmas_[i] * polar_rows(inv_sqrt_sigmas_[i] *
                                                 (u.blocks[i] + v[i]));
  }
  return out;
}

BlockVector BlockGramManifold::riemannian_grad(const BlockObjective& obj,
                                               const BlockFactor& u) const {
  return project_tangent(u, obj.euclidean_grad(u));
}

BlockVector BlockGramManifold::riemannian_hess_vec(const BlockObjective& obj,
                                                   const BlockFactor& u,
                                                   const BlockVector& v) const {
  // Differentiate the gradient field G_i(U) = ∇_i - S_i(U) U_i, where
  // S_i solves S Σ_i + Σ_i S = ∇_i U_iᵀ + U_i ∇_iᵀ with Σ_i held fixed,
  // then project back to the tangent space.
  const BlockVector egrad = obj.euclidean_grad(u);
  const BlockVector ehess = obj.euclidean_hess_vec(u, v);
  BlockVector deriv(v.size());
  for (int i = 0; i < block_count(); ++i) {
    const Eigen::MatrixXd rhs_s = symmetrize(egrad[i] * u.blocks[i].transpose()) * 2.0;
    const Eigen::MatrixXd s = solve_sylvester(i, rhs_s);
    const Eigen::MatrixXd rhs_dot =
        symmetrize(ehess[i] * u.blocks[i].transpose() + egrad[i] * v[i].transpose()) * 2.0;
    const Eigen::MatrixXd s_dot = solve_sylvester(i, rhs_dot);
    deriv[i] = ehess[i] - s_dot * u.blocks[i] - s * v[i];
  }
  return project_tangent(u, deriv);
}

BlockFactor BlockGramManifold::aligned_point() const {
  BlockFactor out;
  out.rank_k = k_;
  out.blocks.resize(sigmas_.size());
  Eigen::MatrixXd frame = Eigen::MatrixXd::Zero(d_, k_);
  frame.leftCols(d_) = Eigen::MatrixXd::Identity(d_, d_);
  for (int i = 0; i < block_count(); ++i) out.blocks[i] = sqrt_sigmas_[i] * frame;
  return out;
}

BlockFactor BlockGramManifold::random_point(std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  BlockFactor out;
  out.rank_k = k_;
  out.blocks.resize(sigmas_.size());
  for (int i = 0; i < block_count(); ++i) {
    Eigen::MatrixXd g(d_, k_);
    for (int r = 0; r < d_; ++r) {
      for (int c = 0; c < k_; ++c) g(r, c) = normal(rng);
    }
    out.blocks[i] = sqrt_sigmas_[i] * polar_rows(g);
  }
  return out;
}

double BlockGramManifold::inner(const BlockVector& a, const BlockVector& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sum += a[i].cwiseProduct(b[i]).sum();
  }
  return sum;
}

double BlockGramManifold::norm(const BlockVector& a) { return std::sqrt(inner(a, a)); }

namespace {

BlockVector zero_like(const BlockFactor& u) {
  BlockVector out(u.blocks.size());
  for (std::size_t i = 0; i < u.blocks.size(); ++i) {
    out[i] = Eigen::MatrixXd::Zero(u.blocks[i].rows(), u.blocks[i].cols());
  }
  return out;
}

// Steihaug-Toint truncated CG for min <g,s> + 0.5 <s,Hs>, |s| <= radius.
// Returns the step and the model decrease.
struct TcgOutcome {
  BlockVector step;
  double model_decrease = 0.0;
  bool hit_boundary = false;
};

TcgOutcome truncated_cg(const BlockGramManifold& man, const BlockObjective& obj,
                        const BlockFactor& u, const BlockVector& grad,
                        double radius, int inner_max) {
  TcgOutcome out;
  out.step = zero_like(u);
  BlockVector r = grad;
  BlockVector dir(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) dir[i] = -r[i];

  const double g0 = BlockGramManifold::norm(grad);
  const double stop_tol = g0 * std::min(0.1, std::sqrt(g0));
  double r_sq = g0 * g0;

  auto model_value = [&](const BlockVector& s) {
    const BlockVector hs = man.riemannian_hess_vec(obj, u, s);
    return BlockGramManifold::inner(grad, s) + 0.5 * BlockGramManifold::inner(s, hs);
  };

  for (int j = 0; j < inner_max; ++j) {
    const BlockVector hd = man.riemannian_hess_vec(obj, u, dir);
    const double d_hd = BlockGramManifold::inner(dir, hd);
    const double s_norm_sq = BlockGramManifold::inner(out.step, out.step);
    const double s_dot_d = BlockGramManifold::inner(out.step, dir);
    const double d_norm_sq = BlockGramManifold::inner(dir, dir);

    if (d_hd <= 0.0) {
      // Negative curvature: go to the trust-region boundary.
      const double disc = s_dot_d * s_dot_d + d_norm_sq * (radius * radius - s_norm_sq);
      const double tau = (-s_dot_d + std::sqrt(std::max(disc, 0.0))) / d_norm_sq;
      out.step = add_scaled(out.step, tau, dir);
      out.hit_boundary = true;
      break;
    }

    const double alpha = r_sq / d_hd;
    const double next_norm_sq = s_norm_sq + 2.0 * alpha * s_dot_d + alpha * alpha * d_norm_sq;
    if (next_norm_sq >= radius * radius) {
      const double disc = s_dot_d * s_dot_d + d_norm_sq * (radius * radius - s_norm_sq);
      const double tau = (-s_dot_d + std::sqrt(std::max(disc, 0.0))) / d_norm_sq;
      out.step = add_scaled(out.step, tau, dir);
      out.hit_boundary = true;
      break;
    }

    out.step = add_scaled(out.step, alpha, dir);
    r = add_scaled(r, alpha, hd);
    const double r_sq_next = BlockGramManifold::inner(r, r);
    if (std::sqrt(r_sq_next) <= stop_tol) break;
    const double beta = r_sq_next / r_sq;
    for (std::size_t i = 0; i < dir.size(); ++i) dir[i] = -r[i] + beta * dir[i];
    r_sq = r_sq_next;
  }

  // Keep the step exactly tangent despite CG round-off drift.
  out.step = man.project_tangent(u, out.step);
  out.model_decrease = -model_value(out.step);
  return out;
}

// Seeded power iterations estimating the smallest Hessian eigenvalue on the
// tangent space; returns the estimate and the corresponding direction.
std::pair<double, BlockVector> min_hess_eig_estimate(const BlockGramManifold& man,
                                                     const BlockObjective& obj,
                                                     const BlockFactor& u,
                                                     std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto random_tangent = [&]() {
    BlockVector v(u.blocks.size());
    for (std::size_t i = 0; i < u.blocks.size(); ++i) {
      Eigen::MatrixXd g(u.blocks[i].rows(), u.blocks[i].cols());
      for (Eigen::Index r = 0; r < g.rows(); ++r) {
        for (Eigen::Index c = 0; c < g.cols(); ++c) g(r, c) = normal(rng);
      }
      v[i] = g;
    }
    v = man.project_tangent(u, v);
    const double n = BlockGramManifold::norm(v);
    if (n > 0.0) {
      for (auto& b : v) b /= n;
    }
    return v;
  };

  // Dominant |eigenvalue| of the Hessian.
  BlockVector v = random_tangent();
  double rayleigh = 0.0;
  for (int it = 0; it < 80; ++it) {
    BlockVector hv = man.riemannian_hess_vec(obj, u, v);
    rayleigh = BlockGramManifold::inner(v, hv);
    const double n = BlockGramManifold::norm(hv);
    if (n < 1e-300) break;
    for (auto& b : hv) b /= n;
    v = std::move(hv);
  }
  const double shift = std::abs(rayleigh) * 1.1 + 1e-8;

  // Power iteration on shift*I - H finds shift - lambda_min.
  BlockVector w = random_tangent();
  double lambda_min = 0.0;
  for (int it = 0; it < 160; ++it) {
    const BlockVector hw = man.riemannian_hess_vec(obj, u, w);
    BlockVector bw(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) bw[i] = shift * w[i] - hw[i];
    lambda_min = BlockGramManifold::inner(w, hw);
    const double n = BlockGramManifold::norm(bw);
    if (n < 1e-300) break;
    for (auto& b : bw) b /= n;
    w = std::move(bw);
  }
  return {lambda_min, w};
}

int numerical_rank(const BlockFactor& u) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(u.stacked());
  const Eigen::VectorXd s = svd.singularValues();
  if (s.size() == 0) return 0;
  const double cutoff = 1e-8 * s(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff) ++rank;
  }
  return rank;
}

}  // namespace

SospReport check_sosp(const BlockGramManifold& manifold, const BlockFactor& point,
                      double tol, const BlockObjective* objective, std::uint64_t seed) {
  if (manifold.feasibility_error(point) > kFeasTol) {
    throw ConstraintError("check_sosp: point violates the block constraints");
  }
  const BlockObjective obj = objective ? *objective : cross_correlation_objective();
  SospReport report;
  report.grad_norm = BlockGramManifold::norm(manifold.riemannian_grad(obj, point));
  report.hess_min_eig_estimate = min_hess_eig_estimate(manifold, obj, point, seed).first;
  report.factor_rank = numerical_rank(point);
  report.certified_global = report.grad_norm <= tol &&
                            report.hess_min_eig_estimate >= -tol &&
                            report.factor_rank < point.rank_k;
  return report;
}

RtrResult rtr_minimize(const BlockGramManifold& manifold, const BlockObjective& obj,
                       const BlockFactor& init, const SolverConfig& cfg) {
  cfg.validate();
  if (manifold.feasibility_error(init) > kFeasTol) {
    std::ostringstream msg;
    msg << "rtr_minimize: init violates U_i U_iᵀ = Σ_i (relative error "
        << manifold.feasibility_error(init) << ")";
    throw ConstraintError(msg.str());
  }

  const int tangent_dim = manifold.block_count() *
                          (manifold.block_dim() * manifold.rank_k() -
                           manifold.block_dim() * (manifold.block_dim() + 1) / 2);
  const int inner_max = std::max(tangent_dim, 10);
  const double radius_max = 1e4 * cfg.step_init;

  RtrResult res;
  BlockFactor u = init;
  double value = obj.value(u);
  res.trace.push_back(value);
  BlockVector grad = manifold.riemannian_grad(obj, u);
  double radius = cfg.step_init;
  int escapes = 0;

  int iter = 0;
  for (; iter < cfg.max_iters; ++iter) {
    const double grad_norm = BlockGramManifold::norm(grad);
    if (grad_norm <= cfg.grad_tol) {
      auto [min_eig, neg_dir] =
          min_hess_eig_estimate(manifold, obj, u, cfg.seed ^ 0x9e3779b97f4a7c15ULL);
      if (min_eig >= -cfg.grad_tol) {
        res.converged = true;
        break;
      }
      if (escapes >= cfg.restarts) break;
      // Walk downhill along the negative-curvature direction.
      bool moved = false;
      double t = std::max(radius, cfg.step_init);
      while (t >= 1e-12) {
        BlockVector step = neg_dir;
        for (auto& b : step) b *= t;
        BlockFactor u_try = manifold.retract(u, step);
        const double value_try = obj.value(u_try);
        if (value_try < value) {
          u = std::move(u_try);
          value = value_try;
          grad = manifold.riemannian_grad(obj, u);
          res.trace.push_back(value);
          moved = true;
          break;
        }
        t *= 0.5;
      }
      ++escapes;
      if (!moved) break;
      continue;
    }

    TcgOutcome tcg = truncated_cg(manifold, obj, u, grad, radius, inner_max);
    if (tcg.model_decrease <= 0.0) {
      radius *= 0.25;
      if (radius < 1e-14) break;
      continue;
    }

    const BlockFactor u_try = manifold.retract(u, tcg.step);
    const double value_try = obj.value(u_try);
    // Regularize the acceptance ratio: near convergence the true decrease
    // sits below the floating-point granularity of the objective, and the
    // raw ratio is pure noise.
    const double rho_reg =
        100.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(value));
    const double rho = (value - value_try + rho_reg) / (tcg.model_decrease + rho_reg);

    if (rho < 0.1) {
      radius *= 0.25;
    } else {
      u = u_try;
      value = value_try;
      grad = manifold.riemannian_grad(obj, u);
      res.trace.push_back(value);
      if (rho > 0.75 && tcg.hit_boundary) {
        radius = std::min(2.0 * radius, radius_max);
      }
    }
    if (radius < 1e-14) break;
  }

  res.point = std::move(u);
  res.value = value;
  res.iterations = iter;
  res.escapes_used = escapes;
  res.report = check_sosp(manifold, res.point, cfg.grad_tol, &obj,
                          cfg.seed ^ 0xda3e39cb94b95bdbULL);
  return res;
}

}  // namespace gaussalign
