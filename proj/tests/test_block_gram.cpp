#include <doctest.h>

#include <cmath>
#include <random>

#include "gaussalign/block_gram.hpp"
#include "gaussalign/errors.hpp"
#include "gaussalign/spectral.hpp"
#include "helpers.hpp"

using namespace gaussalign;
namespace gt = gaussalign::testing;

namespace {

BlockVector random_ambient(const BlockFactor& u, std::mt19937_64& rng) {
  BlockVector v(u.blocks.size());
  for (std::size_t i = 0; i < u.blocks.size(); ++i) {
    v[i] = gt::random_matrix(static_cast<int>(u.blocks[i].rows()),
                             static_cast<int>(u.blocks[i].cols()), rng);
  }
  return v;
}

std::vector<Eigen::MatrixXd> random_sigmas(int p, int d, std::mt19937_64& rng) {
  std::vector<Eigen::MatrixXd> out;
  out.reserve(p);
  for (int i = 0; i < p; ++i) out.push_back(gt::random_spd(d, rng));
  return out;
}

}  // namespace

TEST_CASE("manifold construction rejects non-PD blocks") {
  Eigen::Matrix2d singular;
  singular << 1, 0, 0, 0;
  CHECK_THROWS_AS(BlockGramManifold({singular}, 3), NotPsdError);
  CHECK_THROWS_AS(BlockGramManifold({Eigen::Matrix2d::Identity()}, 1), DimensionError);
}

TEST_CASE("feasible points satisfy the block constraints") {
  std::mt19937_64 rng(73);
  BlockGramManifold man(random_sigmas(4, 3, rng), 4);
  CHECK(man.feasibility_error(man.aligned_point()) <= 1e-12);
  CHECK(man.feasibility_error(man.random_point(9)) <= 1e-12);
}

TEST_CASE("tangent projection gives block-tangent vectors and is idempotent") {
  std::mt19937_64 rng(79);
  BlockGramManifold man(random_sigmas(3, 4, rng), 5);
  const BlockFactor u = man.random_point(rng());
  const BlockVector w = random_ambient(u, rng);
  const BlockVector v = man.project_tangent(u, w);
  for (int i = 0; i < man.block_count(); ++i) {
    const Eigen::MatrixXd t =
        v[i] * u.blocks[i].transpose() + u.blocks[i] * v[i].transpose();
    CHECK(t.cwiseAbs().maxCoeff() <= 1e-10);
  }
  const BlockVector vv = man.project_tangent(u, v);
  for (int i = 0; i < man.block_count(); ++i) {
    CHECK((vv[i] - v[i]).norm() <= 1e-12 * std::max(1.0, v[i].norm()));
  }
}

TEST_CASE("retraction restores feasibility exactly") {
  std::mt19937_64 rng(83);
  BlockGramManifold man(random_sigmas(3, 3, rng), 4);
  const BlockFactor u = man.random_point(rng());
  BlockVector v = man.project_tangent(u, random_ambient(u, rng));
  for (auto& b : v) b *= 0.7;
  CHECK(man.feasibility_error(man.retract(u, v)) <= 1e-12);
}

TEST_CASE("riemannian gradient matches finite differences along retractions") {
  std::mt19937_64 rng(89);
  BlockGramManifold man(random_sigmas(4, 3, rng), 4);
  const BlockObjective obj = cross_correlation_objective();
  for (int trial = 0; trial < 8; ++trial) {
    const BlockFactor u = man.random_point(rng());
    BlockVector v = man.project_tangent(u, random_ambient(u, rng));
    const double vn = BlockGramManifold::norm(v);
    for (auto& b : v) b /= vn;

    const BlockVector grad = man.riemannian_grad(obj, u);
    const double analytic = BlockGramManifold::inner(grad, v);

    const double h = 1e-6;
    BlockVector vp = v, vm = v;
    for (auto& b : vp) b *= h;
    for (auto& b : vm) b *= -h;
    const double fd =
        (obj.value(man.retract(u, vp)) - obj.value(man.retract(u, vm))) / (2.0 * h);
    CHECK(std::abs(fd - analytic) <= 1e-5 * std::max(1.0, std::abs(analytic)));
  }
}

TEST_CASE("riemannian hessian is symmetric on the tangent space") {
  std::mt19937_64 rng(97);
  BlockGramManifold man(random_sigmas(3, 3, rng), 4);
  const BlockObjective obj = cross_correlation_objective();
  const BlockFactor u = man.random_point(rng());
  for (int trial = 0; trial < 6; ++trial) {
    const BlockVector v = man.project_tangent(u, random_ambient(u, rng));
    const BlockVector w = man.project_tangent(u, random_ambient(u, rng));
    const double vhw = BlockGramManifold::inner(v, man.riemannian_hess_vec(obj, u, w));
    const double whv = BlockGramManifold::inner(w, man.riemannian_hess_vec(obj, u, v));
    CHECK(std::abs(vhw - whv) <= 1e-9 * std::max(1.0, std::abs(vhw)));
  }
}

TEST_CASE("two univariate blocks reach the product of standard deviations") {
  std::vector<Eigen::MatrixXd> sigmas = {Eigen::MatrixXd::Constant(1, 1, 4.0),
                                         Eigen::MatrixXd::Constant(1, 1, 1.0)};
  BlockGramManifold man(sigmas, 2);
  SolverConfig cfg = mmot_rtr_defaults();
  RtrResult res = rtr_minimize(man, cross_correlation_objective(),
                               man.aligned_point(), cfg);
  CHECK(res.value == doctest::Approx(-2.0).epsilon(1e-8));
  CHECK(res.report.certified_global);
  CHECK(res.report.factor_rank == 1);
}

TEST_CASE("two general blocks reach the nuclear-norm closed form") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 3);
    auto sigmas = random_sigmas(2, d, rng);
    // Independent value: -tr((S1^{1/2} S2 S1^{1/2})^{1/2}).
    const Eigen::MatrixXd s1_half = sqrt_psd(sigmas[0]);
    const double expected =
        -sqrt_psd(symmetrize(s1_half * sigmas[1] * s1_half)).trace();

    BlockGramManifold man(sigmas, d + 1);
    RtrResult res = rtr_minimize(man, cross_correlation_objective(),
                                 man.aligned_point(), mmot_rtr_defaults());
    CHECK(res.value == doctest::Approx(expected).epsilon(1e-7));
  }
}

TEST_CASE("identical identity blocks align perfectly") {
  const int d = 2, p = 4;
  std::vector<Eigen::MatrixXd> sigmas(p, Eigen::MatrixXd::Identity(d, d));
  BlockGramManifold man(sigmas, d + 1);
  RtrResult res = rtr_minimize(man, cross_correlation_objective(),
                               man.aligned_point(), mmot_rtr_defaults());
  CHECK(res.value == doctest::Approx(-d * p * (p - 1) / 2.0).epsilon(1e-10));
  for (int i = 1; i < p; ++i) {
    CHECK((res.point.blocks[i] - res.point.blocks[0]).norm() <= 1e-6);
  }
}

TEST_CASE("objective trace is non-increasing across accepted steps") {
  std::mt19937_64 rng(103);
  BlockGramManifold man(random_sigmas(5, 3, rng), 4);
  RtrResult res = rtr_minimize(man, cross_correlation_objective(),
                               man.random_point(5), mmot_rtr_defaults());
  for (std::size_t i = 1; i < res.trace.size(); ++i) {
    CHECK(res.trace[i] <= res.trace[i - 1] + 1e-12);
  }
  CHECK(man.feasibility_error(res.point) <= 1e-10);
}

TEST_CASE("check_sosp classifies stationary and non-stationary points") {
  std::mt19937_64 rng(107);
  auto sigmas = random_sigmas(2, 2, rng);
  BlockGramManifold man(sigmas, 3);

  RtrResult res = rtr_minimize(man, cross_correlation_objective(),
                               man.aligned_point(), mmot_rtr_defaults());
  SospReport at_opt = check_sosp(man, res.point, 1e-6);
  CHECK(at_opt.certified_global);
  CHECK(at_opt.factor_rank == 2);
  CHECK(at_opt.factor_rank < res.point.rank_k);

  // A generic feasible point is not stationary.
  SospReport off = check_sosp(man, man.random_point(11), 1e-6);
  CHECK(off.grad_norm > 1e-6);
  CHECK_FALSE(off.certified_global);
}

TEST_CASE("full-rank stationary points are never certified") {
  // One block, constant objective: every point is a SOSP, but the factor has
  // full rank k, so the rank-deficiency certificate does not apply.
  std::vector<Eigen::MatrixXd> sigmas = {Eigen::MatrixXd::Constant(1, 1, 2.0)};
  BlockGramManifold man(sigmas, 1);
  SospReport report = check_sosp(man, man.aligned_point(), 1e-6);
  CHECK(report.grad_norm <= 1e-6);
  CHECK(report.hess_min_eig_estimate >= -1e-6);
  CHECK(report.factor_rank == 1);
  CHECK_FALSE(report.certified_global);
}

TEST_CASE("infeasible init is rejected") {
  std::mt19937_64 rng(109);
  BlockGramManifold man(random_sigmas(2, 2, rng), 3);
  BlockFactor bad = man.aligned_point();
  bad.blocks[0] *= 2.0;
  CHECK_THROWS_AS(
      rtr_minimize(man, cross_correlation_objective(), bad, mmot_rtr_defaults()),
      ConstraintError);
}
