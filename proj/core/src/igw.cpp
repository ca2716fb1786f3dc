#include "gaussalign/igw.hpp"

#include <cmath>
#include <sstream>

#include "gaussalign/errors.hpp"
#include "gaussalign/spectral.hpp"

namespace gaussalign {

namespace {

constexpr double kCenteredTol = 1e-12;
constexpr double kParallelTol = 1e-10;

Eigen::VectorXd pad(const Eigen::VectorXd& v, Eigen::Index n) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  out.head(v.size()) = v;
  return out;
}

struct BoundIngredients {
  double xi;
  Eigen::VectorXd eta1;
  Eigen::VectorXd eta2;
};

BoundIngredients bound_ingredients(const SpectralForm& s1, const SpectralForm& s2) {
  const Eigen::Index n = std::max(s1.lambdas.size(), s2.lambdas.size());
  const Eigen::VectorXd l1 = pad(s1.lambdas, n);
  const Eigen::VectorXd l2 = pad(s2.lambdas, n);
  BoundIngredients out;
  out.xi = (l1 - l2).squaredNorm() + 2.0 * s1.eta.squaredNorm() +
           2.0 * s2.eta.squaredNorm() +
           std::pow(s1.m_tilde.squaredNorm() - s2.m_tilde.squaredNorm(), 2);
  out.eta1 = pad(s1.eta, n);
  out.eta2 = pad(s2.eta, n);
  return out;
}

IgwBounds bounds_from_forms(const SpectralForm& s1, const SpectralForm& s2) {
  const BoundIngredients ing = bound_ingredients(s1, s2);
  IgwBounds b;
  b.xi = ing.xi;
  b.lower_sq = ing.xi - 4.0 * ing.eta1.norm() * ing.eta2.norm();
  b.upper_sq = ing.xi - 4.0 * ing.eta1.dot(ing.eta2);
  b.lower = std::sqrt(std::max(b.lower_sq, 0.0));
  b.upper = std::sqrt(std::max(b.upper_sq, 0.0));
  return b;
}

// The uncoupled part of IGW^2: everything except the -2*gamma term.
double igw_sq_offset(const SpectralForm& s1, const SpectralForm& s2) {
  return s1.lambdas.squaredNorm() + s2.lambdas.squaredNorm() +
         2.0 * s1.eta.squaredNorm() + 2.0 * s2.eta.squaredNorm() +
         std::pow(s1.m_tilde.squaredNorm() - s2.m_tilde.squaredNorm(), 2);
}

double univariate_igw(const Gaussian& g1, const Gaussian& g2) {
  const double var1 = g1.cov(0, 0);
  const double var2 = g2.cov(0, 0);
  const double sd1 = std::sqrt(std::max(var1, 0.0));
  const double sd2 = std::sqrt(std::max(var2, 0.0));
  const double m1 = g1.mean(0);
  const double m2 = g2.mean(0);
  const double sq = std::pow(var1 - var2, 2) + std::pow(m1 * m1 - m2 * m2, 2) +
                    2.0 * std::pow(sd1 * std::abs(m1) - sd2 * std::abs(m2), 2);
  return std::sqrt(std::max(sq, 0.0));
}

}  // namespace

double gamma_objective(const SpectralForm& s1, const SpectralForm& s2,
                       const StiefelPoint& c) {
  if (s1.dim() < s2.dim()) return gamma_objective(s2, s1, c);
  if (c.rows() != s1.dim() || c.cols() != s2.dim()) {
    std::ostringstream msg;
    msg << "gamma_objective: frame is " << c.rows() << "x" << c.cols()
        << ", expected " << s1.dim() << "x" << s2.dim();
    throw DimensionError(msg.str());
  }
  const Eigen::MatrixXd& m = c.matrix;
  const double trace_term =
      (s1.lambdas.asDiagonal() * m * s2.lambdas.asDiagonal() * m.transpose()).trace();
  const double mean_term = 2.0 * s1.eta.dot(m * s2.eta);
  return trace_term + mean_term;
}

Eigen::MatrixXd gamma_objective_grad(const SpectralForm& s1, const SpectralForm& s2,
                                     const Eigen::MatrixXd& c) {
  return 2.0 * (s1.lambdas.asDiagonal() * c * s2.lambdas.asDiagonal()) +
         2.0 * s1.eta * s2.eta.transpose();
}

IgwBounds igw_bounds(const Gaussian& g1, const Gaussian& g2) {
  return bounds_from_forms(spectral_form(g1), spectral_form(g2));
}

std::optional<double> igw_closed_form(const Gaussian& g1, const Gaussian& g2) {
  // (a) both centered: l2 distance of zero-padded sorted spectra.
  if (g1.centered(kCenteredTol) && g2.centered(kCenteredTol)) {
    const int n = std::max(g1.dim(), g2.dim());
    return (padded_spectrum(g1, n) - padded_spectrum(g2, n)).norm();
  }
  // (b) univariate: the only orthonormal frames on R are +-1.
  if (g1.dim() == 1 && g2.dim() == 1) {
    return univariate_igw(g1, g2);
  }
  // (c) co-centered: eta vectors parallel with non-negative ratio, up to the
  // sign gauge of the eigenbasis. Flipping an eigenvector flips the matching
  // component of eta, so parallelism is tested on componentwise magnitudes;
  // this keeps the detection invariant under orthogonal transforms of either
  // input measure.
  const SpectralForm s1 = spectral_form(g1);
  const SpectralForm s2 = spectral_form(g2);
  const BoundIngredients ing = bound_ingredients(s1, s2);
  const double n1 = ing.eta1.norm();
  const double n2 = ing.eta2.norm();
  const bool co_centered =
      (n1 == 0.0 || n2 == 0.0) ||
      (1.0 - ing.eta1.cwiseAbs().dot(ing.eta2.cwiseAbs()) / (n1 * n2) <= kParallelTol);
  if (co_centered) {
    return std::sqrt(std::max(ing.xi - 4.0 * n1 * n2, 0.0));
  }
  return std::nullopt;
}

IgwRgdResult igw_distance_rgd(const Gaussian& g1, const Gaussian& g2,
                              const SolverConfig& cfg) {
  cfg.validate();
  SpectralForm sa = spectral_form(g1);
  SpectralForm sb = spectral_form(g2);
  const bool swapped = sa.dim() < sb.dim();
  if (swapped) std::swap(sa, sb);
  const int d1 = sa.dim();
  const int d2 = sb.dim();

  StiefelObjective objective = [&sa, &sb](const Eigen::MatrixXd& c,
                                          Eigen::MatrixXd* grad_out) {
    if (grad_out) *grad_out = gamma_objective_grad(sa, sb, c);
    const double trace_term =
        (sa.lambdas.asDiagonal() * c * sb.lambdas.asDiagonal() * c.transpose()).trace();
    return trace_term + 2.0 * sa.eta.dot(c * sb.eta);
  };

  // Deterministic inits: the identity, its first-column sign flip (reaching
  // the second connected component of the frame set; column sign changes
  // leave the trace term alone and only move the mean term), the diagonal
  // sign alignment matching the eta component signs (exactly optimal for
  // co-centered pairs, where trace and mean terms peak simultaneously), and
  // a Householder frame mapping the eta directions onto each other (mean
  // term maximal for any pair). Seeded random inits come on top.
  std::vector<StiefelPoint> inits;
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(d1, d2);
  inits.push_back(StiefelPoint{eye});
  {
    Eigen::MatrixXd flipped = eye;
    flipped.col(0) = -flipped.col(0);
    inits.push_back(StiefelPoint{std::move(flipped)});
  }
  if (sa.eta.norm() > 0.0 && sb.eta.norm() > 0.0) {
    Eigen::MatrixXd sign_aligned = eye;
    for (int k = 0; k < d2; ++k) {
      if (sa.eta(k) * sb.eta(k) < 0.0) sign_aligned.col(k) = -sign_aligned.col(k);
    }
    inits.push_back(StiefelPoint{std::move(sign_aligned)});

    auto householder_to_e1 = [](const Eigen::VectorXd& unit) {
      Eigen::VectorXd v = unit;
      v(0) -= 1.0;
      Eigen::MatrixXd h = Eigen::MatrixXd::Identity(unit.size(), unit.size());
      const double vsq = v.squaredNorm();
      if (vsq > 1e-300) h -= (2.0 / vsq) * v * v.transpose();
      return h;
    };
    const Eigen::MatrixXd h1 = householder_to_e1(sa.eta.normalized());
    const Eigen::MatrixXd h2 = householder_to_e1(sb.eta.normalized());
    inits.push_back(StiefelPoint{h1 * eye * h2});
  }
  for (int r = 0; r < cfg.restarts; ++r) {
    inits.push_back(random_stiefel(d1, d2, cfg.seed + 0x9e3779b9u * (r + 1)));
  }

  IgwRgdResult out;
  bool have_best = false;
  for (const StiefelPoint& init : inits) {
    RgdResult run = rgd_maximize(objective, init, cfg);
    out.total_iterations += run.iterations;
    if (!have_best || run.value > out.gamma.gamma) {
      out.gamma.c = run.point;
      out.gamma.gamma = run.value;
      out.gamma.trace = run.trace;
      have_best = true;
    }
  }
  out.gamma.swapped = swapped;

  const double dist_sq = igw_sq_offset(sa, sb) - 2.0 * out.gamma.gamma;
  out.distance = std::sqrt(std::max(dist_sq, 0.0));
  out.bounds = bounds_from_forms(sa, sb);

  // Any feasible frame yields a distance inside the analytic bounds. At the
  // co-centered equality cases both sides are square roots of cancelling
  // differences, so they agree only to sqrt round-off; snap into the
  // interval there and treat anything larger as solver corruption.
  const double slack = 1e-6 * std::max(1.0, out.bounds.upper);
  if (out.distance < out.bounds.lower - slack ||
      out.distance > out.bounds.upper + slack) {
    std::ostringstream msg;
    msg << "igw_distance_rgd: estimate " << out.distance
        << " escaped the analytic bounds [" << out.bounds.lower << ", "
        << out.bounds.upper << "]";
    throw Error(msg.str());
  }
  out.distance = std::min(std::max(out.distance, out.bounds.lower), out.bounds.upper);
  return out;
}

GaussianCoupling igw_coupling(const Gaussian& g1, const Gaussian& g2,
                              const StiefelPoint& c) {
  const int d1 = g1.dim();
  const int d2 = g2.dim();
  if (d1 < d2) {
    throw DimensionError("igw_coupling: requires dim(g1) >= dim(g2); swap the arguments");
  }
  if (c.rows() != d1 || c.cols() != d2) {
    std::ostringstream msg;
    msg << "igw_coupling: frame is " << c.rows() << "x" << c.cols()
        << ", expected " << d1 << "x" << d2;
    throw DimensionError(msg.str());
  }
  const SpectralForm s1 = spectral_form(g1);
  const SpectralForm s2 = spectral_form(g2);

  GaussianCoupling out;
  out.cross = s1.q * s1.lambdas.cwiseSqrt().asDiagonal() * c.matrix *
              s2.lambdas.cwiseSqrt().asDiagonal() * s2.q.transpose();

  out.mean.resize(d1 + d2);
  out.mean << g1.mean, g2.mean;
  out.cov = Eigen::MatrixXd::Zero(d1 + d2, d1 + d2);
  out.cov.topLeftCorner(d1, d1) = g1.cov;
  out.cov.bottomRightCorner(d2, d2) = g2.cov;
  out.cov.topRightCorner(d1, d2) = out.cross;
  out.cov.bottomLeftCorner(d2, d1) = out.cross.transpose();
  if (!is_psd(out.cov, kCovPsdTol)) {
    throw NotPsdError("igw_coupling: joint covariance is not PSD for this frame");
  }

  // Pseudo-inverse of Λ1^{1/2} on its support.
  const double lmax = s1.lambdas.size() > 0 ? s1.lambdas(0) : 0.0;
  Eigen::VectorXd inv_root = Eigen::VectorXd::Zero(d1);
  for (int i = 0; i < d1; ++i) {
    if (s1.lambdas(i) > 1e-10 * lmax) inv_root(i) = 1.0 / std::sqrt(s1.lambdas(i));
  }
  out.map.matrix = s2.q * s2.lambdas.cwiseSqrt().asDiagonal() * c.matrix.transpose() *
                   inv_root.asDiagonal() * s1.q.transpose();
  out.map.pivot = g1.mean;
  out.map.offset = g2.mean;
  return out;
}

Gaussian igw_barycenter(const WeightedCollection& col, int d_target) {
  if (d_target < 1) throw RangeError("igw_barycenter: d_target must be >= 1");
  for (const Gaussian& g : col.gaussians) {
    if (!g.centered(kCenteredTol)) {
      throw UnsupportedInputError(
          "igw_barycenter: only centered inputs are supported (mean norm > 1e-12)");
    }
  }

  Eigen::VectorXd bar = Eigen::VectorXd::Zero(d_target);
  for (int i = 0; i < col.size(); ++i) {
    const Gaussian& g = col.gaussians[i];
    SpectralDecomposition eig = sym_eig(g.cov);
    const int keep = std::min(d_target, g.dim());
    bar.head(keep) += col.weights(i) * eig.eigenvalues.head(keep).cwiseMax(0.0);
  }
  return Gaussian{Eigen::VectorXd::Zero(d_target), bar.asDiagonal()};
}

}  // namespace gaussalign
