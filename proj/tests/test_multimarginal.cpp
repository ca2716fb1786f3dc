#include <doctest.h>

#include <cmath>
#include <random>

#include "gaussalign/errors.hpp"
#include "gaussalign/igw.hpp"
#include "gaussalign/multimarginal.hpp"
#include "gaussalign/spectral.hpp"
#include "gaussalign/transport.hpp"
#include "helpers.hpp"

using namespace gaussalign;
namespace gt = gaussalign::testing;

namespace {

Gaussian centered(const Eigen::MatrixXd& cov) {
  return Gaussian{Eigen::VectorXd::Zero(cov.rows()), cov};
}

// Feasible multimarginal point glued from pairwise optimal maps through the
// first marginal: X_i = A_i X_1 with A_1 = I. Independent of the low-rank
// solver; used as a lower bound on the achievable objective.
double glued_pairwise_objective(const std::vector<Gaussian>& gs) {
  const int p = static_cast<int>(gs.size());
  std::vector<Eigen::MatrixXd> maps(p);
  maps[0] = Eigen::MatrixXd::Identity(gs[0].dim(), gs[0].dim());
  for (int i = 1; i < p; ++i) maps[i] = bw_map(gs[0], gs[i]).matrix;
  double total = 0.0;
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      total += (maps[i] * gs[0].cov * maps[j].transpose()).trace();
    }
  }
  return total;
}

}  // namespace

TEST_CASE("multimarginal IGW closed form") {
  SUBCASE("identical inputs cost nothing") {
    std::mt19937_64 rng(193);
    Gaussian g = gt::random_centered_gaussian(3, rng);
    MultiCoupling mc = mm_igw_closed_form({g, g, g});
    CHECK(mc.cost <= 1e-10);
  }

  SUBCASE("two marginals reduce to the squared spectrum distance") {
    std::mt19937_64 rng(197);
    Gaussian g1 = gt::random_centered_gaussian(4, rng);
    Gaussian g2 = gt::random_centered_gaussian(4, rng);
    MultiCoupling mc = mm_igw_closed_form({g1, g2});
    const double gbw = gt::gbw_oracle(g1.cov, g2.cov);
    CHECK(mc.cost == doctest::Approx(gbw * gbw).epsilon(1e-10));
  }

  SUBCASE("diagonal spectra hand value") {
    Gaussian a = centered((Eigen::Matrix2d() << 4, 0, 0, 1).finished());
    Gaussian b = centered(Eigen::Matrix2d::Identity());
    Gaussian c = centered((Eigen::Matrix2d() << 2, 0, 0, 1).finished());
    MultiCoupling mc = mm_igw_closed_form({a, b, c});
    CHECK(mc.cost == doctest::Approx(14.0).epsilon(1e-12));
  }

  SUBCASE("cost equals the sum of pairwise closed forms; coupling is PSD") {
    std::mt19937_64 rng(199);
    for (int trial = 0; trial < 15; ++trial) {
      const int p = 2 + static_cast<int>(rng() % 4);
      std::vector<Gaussian> gs;
      for (int i = 0; i < p; ++i) {
        gs.push_back(gt::random_centered_gaussian(2 + static_cast<int>(rng() % 4), rng));
      }
      MultiCoupling mc = mm_igw_closed_form(gs);
      double pair_sum = 0.0;
      for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j) {
          const double d = *igw_closed_form(gs[i], gs[j]);
          pair_sum += d * d;
        }
      }
      CHECK(std::abs(mc.cost - pair_sum) <= 1e-10 * std::max(1.0, pair_sum));
      CHECK(is_psd(mc.stacked_cov(), 1e-8));
    }
  }

  SUBCASE("uncentered inputs are rejected") {
    Gaussian off{Eigen::Vector2d(1, 0), Eigen::Matrix2d::Identity()};
    CHECK_THROWS_AS(mm_igw_closed_form({off}), UnsupportedInputError);
  }
}

TEST_CASE("multimarginal OT via low-rank factorization") {
  SUBCASE("identical isotropic marginals couple perfectly") {
    Gaussian g = centered(Eigen::Matrix3d::Identity());
    MultiCoupling mc = mm_ot_solve({g, g, g});
    CHECK(mc.cost <= 1e-8);
    CHECK(mc.certified());
  }

  SUBCASE("two marginals match the Bures-Wasserstein closed form") {
    std::mt19937_64 rng(211);
    for (int trial = 0; trial < 10; ++trial) {
      const int d = 2 + static_cast<int>(rng() % 3);
      Gaussian g1 = gt::random_gaussian_nd(d, rng);
      Gaussian g2 = gt::random_gaussian_nd(d, rng);
      MultiCoupling mc = mm_ot_solve({g1, g2});
      const double bw = bw_distance(g1, g2);
      CHECK(mc.cost == doctest::Approx(bw * bw).epsilon(1e-6));
    }
  }

  SUBCASE("equal identity covariances leave only the mean cost") {
    std::mt19937_64 rng(223);
    std::vector<Gaussian> gs;
    double mean_cost = 0.0;
    for (int i = 0; i < 3; ++i) {
      Eigen::VectorXd m = gt::random_matrix(3, 1, rng).col(0);
      gs.push_back(Gaussian{m, Eigen::Matrix3d::Identity()});
    }
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) {
        mean_cost += (gs[i].mean - gs[j].mean).squaredNorm();
      }
    }
    MultiCoupling mc = mm_ot_solve(gs);
    CHECK(mc.cost == doctest::Approx(mean_cost).epsilon(1e-8));
  }

  SUBCASE("marginals are exact, the coupling is PSD, rank is d when certified") {
    std::mt19937_64 rng(227);
    std::vector<Gaussian> gs;
    for (int i = 0; i < 4; ++i) gs.push_back(gt::random_centered_gaussian(3, rng));
    MultiCoupling mc = mm_ot_solve(gs);
    for (int i = 0; i < 4; ++i) {
      CHECK((mc.blocks[i][i] - gs[i].cov).norm() <= 1e-8);
    }
    const Eigen::MatrixXd stacked = mc.stacked_cov();
    CHECK(is_psd(stacked, 1e-8));
    if (mc.certified()) {
      SpectralDecomposition eig = sym_eig(stacked);
      const double cutoff = 1e-6 * eig.eigenvalues(0);
      int rank = 0;
      for (int i = 0; i < eig.eigenvalues.size(); ++i) {
        if (eig.eigenvalues(i) > cutoff) ++rank;
      }
      CHECK(rank == 3);
    }
  }

  SUBCASE("objective dominates the glued pairwise feasible point") {
    std::mt19937_64 rng(229);
    for (int trial = 0; trial < 8; ++trial) {
      const int p = 3 + static_cast<int>(rng() % 3);
      std::vector<Gaussian> gs;
      for (int i = 0; i < p; ++i) gs.push_back(gt::random_centered_gaussian(3, rng));
      MultiCoupling mc = mm_ot_solve(gs);
      CHECK(mm_ot_objective(mc) >= glued_pairwise_objective(gs) - 1e-6);
    }
  }

  SUBCASE("input validation") {
    Gaussian flat = centered((Eigen::Matrix2d() << 1, 0, 0, 0).finished());
    Gaussian ok = centered(Eigen::Matrix2d::Identity());
    CHECK_THROWS_AS(mm_ot_solve({flat, ok}), NotPsdError);
    Gaussian other = centered(Eigen::Matrix3d::Identity());
    CHECK_THROWS_AS(mm_ot_solve({ok, other}), DimensionError);
  }
}

TEST_CASE("barycenter from a multimarginal coupling") {
  SUBCASE("degenerate weights recover a marginal") {
    std::mt19937_64 rng(233);
    std::vector<Gaussian> gs;
    for (int i = 0; i < 3; ++i) gs.push_back(gt::random_gaussian_nd(2, rng));
    MultiCoupling mc = mm_ot_solve(gs);
    Gaussian first = barycenter_from_mm(mc, Eigen::Vector3d(1, 0, 0));
    CHECK((first.mean - gs[0].mean).norm() <= 1e-10);
    CHECK((first.cov - gs[0].cov).norm() <= 1e-8 * gs[0].cov.norm());
  }

  SUBCASE("identical inputs return the common Gaussian") {
    Gaussian g = centered(2.0 * Eigen::Matrix2d::Identity());
    MultiCoupling mc = mm_ot_solve({g, g, g});
    Gaussian bar = barycenter_from_mm(
        mc, Eigen::Vector3d(1.0 / 3, 1.0 / 3, 1.0 / 3));
    CHECK((bar.cov - g.cov).norm() <= 1e-8);
  }

  SUBCASE("univariate pair midpoint matches the fixed-point value") {
    Gaussian a = centered(Eigen::MatrixXd::Constant(1, 1, 1.0));
    Gaussian b = centered(Eigen::MatrixXd::Constant(1, 1, 9.0));
    MultiCoupling mc = mm_ot_solve({a, b});
    Gaussian bar = barycenter_from_mm(mc, Eigen::Vector2d(0.5, 0.5));
    CHECK(bar.cov(0, 0) == doctest::Approx(4.0).epsilon(1e-6));
  }

  SUBCASE("block route agrees with the factor route") {
    std::mt19937_64 rng(239);
    std::vector<Gaussian> gs;
    for (int i = 0; i < 3; ++i) gs.push_back(gt::random_centered_gaussian(3, rng));
    MultiCoupling mc = mm_ot_solve(gs);
    const Eigen::Vector3d w(0.2, 0.3, 0.5);
    Gaussian via_factor = barycenter_from_mm(mc, w);
    MultiCoupling blocks_only = mc;
    blocks_only.factor.reset();
    Gaussian via_blocks = barycenter_from_mm(blocks_only, w);
    CHECK((via_factor.cov - via_blocks.cov).norm() <=
          1e-10 * std::max(1.0, via_factor.cov.norm()));
  }

  SUBCASE("cross-consistency with the fixed-point barycenter") {
    std::mt19937_64 rng(241);
    for (int trial = 0; trial < 5; ++trial) {
      const int p = 2 + static_cast<int>(rng() % 3);
      std::vector<Gaussian> gs;
      for (int i = 0; i < p; ++i) gs.push_back(gt::random_centered_gaussian(3, rng));
      MultiCoupling mc = mm_ot_solve(gs);
      Gaussian from_mm = barycenter_from_mm(
          mc, Eigen::VectorXd::Constant(p, 1.0 / p));
      Gaussian fixed_point =
          w2_barycenter_fixed_point(make_uniform_collection(gs)).barycenter;
      CHECK(bw_distance(from_mm, fixed_point) <= 1e-4);
    }
  }

  SUBCASE("weight count must match") {
    Gaussian g = centered(Eigen::Matrix2d::Identity());
    MultiCoupling mc = mm_ot_solve({g, g});
    CHECK_THROWS_AS(barycenter_from_mm(mc, Eigen::Vector3d(1, 0, 0)),
                    InvalidInputError);
  }
}
