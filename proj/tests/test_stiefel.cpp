#include <doctest.h>

#include <cmath>
#include <random>

#include "gaussalign/errors.hpp"
#include "gaussalign/stiefel.hpp"
#include "helpers.hpp"

using namespace gaussalign;
namespace gt = gaussalign::testing;

TEST_CASE("trace objective is stationary at the identity") {
  StiefelObjective obj = [](const Eigen::MatrixXd& c, Eigen::MatrixXd* grad) {
    if (grad) *grad = Eigen::MatrixXd::Identity(c.rows(), c.cols());
    return c.trace();
  };
  SolverConfig cfg;
  cfg.grad_tol = 1e-10;
  RgdResult res = rgd_maximize(obj, StiefelPoint{Eigen::MatrixXd::Identity(4, 4)}, cfg);
  CHECK(res.iterations == 0);
  CHECK(res.converged);
  CHECK(res.value == doctest::Approx(4.0));
}

TEST_CASE("linear objective on the sphere climbs to the unit direction") {
  const Eigen::Vector2d b(3, 4);
  StiefelObjective obj = [&b](const Eigen::MatrixXd& c, Eigen::MatrixXd* grad) {
    if (grad) *grad = b;
    return b.dot(c.col(0));
  };
  SolverConfig cfg;
  cfg.max_iters = 200;
  cfg.grad_tol = 1e-10;
  Eigen::MatrixXd init(2, 1);
  init << 1, 0;
  RgdResult res = rgd_maximize(obj, StiefelPoint{init}, cfg);
  CHECK(res.value == doctest::Approx(5.0).epsilon(1e-8));
  CHECK(res.point.matrix(0, 0) == doctest::Approx(0.6).epsilon(1e-6));
  CHECK(res.point.matrix(1, 0) == doctest::Approx(0.8).epsilon(1e-6));
}

TEST_CASE("gamma-style quadratic from the identity needs no iterations when aligned") {
  // Centered objective tr(L1 C L2 Cᵀ), spectra sorted: identity is optimal
  // by the rearrangement of eigenvalues.
  const Eigen::Vector3d l1(5, 2, 1);
  const Eigen::Vector3d l2(4, 3, 0.5);
  StiefelObjective obj = [&](const Eigen::MatrixXd& c, Eigen::MatrixXd* grad) {
    if (grad) *grad = 2.0 * l1.asDiagonal() * c * l2.asDiagonal();
    return (l1.asDiagonal() * c * l2.asDiagonal() * c.transpose()).trace();
  };
  SolverConfig cfg;
  cfg.grad_tol = 1e-9;
  RgdResult res = rgd_maximize(obj, StiefelPoint{Eigen::MatrixXd::Identity(3, 3)}, cfg);
  CHECK(res.iterations == 0);
  CHECK(res.value == doctest::Approx(l1.dot(l2)).epsilon(1e-12));
}

TEST_CASE("accepted objective trace is monotone and iterates stay feasible") {
  std::mt19937_64 rng(59);
  const Eigen::MatrixXd a = gt::random_matrix(6, 3, rng);
  int evals = 0;
  StiefelObjective obj = [&](const Eigen::MatrixXd& c, Eigen::MatrixXd* grad) {
    ++evals;
    // Every candidate comes out of the retraction; check feasibility here.
    const Eigen::MatrixXd gram = c.transpose() * c;
    REQUIRE((gram - Eigen::MatrixXd::Identity(3, 3)).norm() <= 1e-10);
    if (grad) *grad = a;
    return (a.transpose() * c).trace();
  };
  SolverConfig cfg;
  cfg.max_iters = 100;
  cfg.grad_tol = 1e-9;
  RgdResult res = rgd_maximize(obj, random_stiefel(6, 3, 1), cfg);
  for (std::size_t i = 1; i < res.trace.size(); ++i) {
    CHECK(res.trace[i] >= res.trace[i - 1]);
  }
  CHECK(evals > 0);
  CHECK(res.point.feasibility_error() <= 1e-10);
}

TEST_CASE("tangent projection kills the symmetric part") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    const int d1 = 3 + static_cast<int>(rng() % 5);
    const int d2 = 1 + static_cast<int>(rng() % d1);
    const StiefelPoint c = random_stiefel(d1, d2, rng());
    const Eigen::MatrixXd ambient = gt::random_matrix(d1, d2, rng);
    const Eigen::MatrixXd v = stiefel_tangent_project(c.matrix, ambient);
    const Eigen::MatrixXd sym =
        c.matrix.transpose() * v + v.transpose() * c.matrix;
    CHECK(sym.cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("projected gradient matches finite differences along retractions") {
  std::mt19937_64 rng(67);
  const int d1 = 5, d2 = 3;
  const Eigen::MatrixXd a = gt::random_matrix(d1, d2, rng);
  const Eigen::MatrixXd b = gt::random_symmetric(d1, rng);
  auto value = [&](const Eigen::MatrixXd& c) {
    return (a.transpose() * c).trace() + (c.transpose() * b * c).trace();
  };
  auto egrad = [&](const Eigen::MatrixXd& c) -> Eigen::MatrixXd {
    return a + 2.0 * b * c;
  };

  for (int trial = 0; trial < 10; ++trial) {
    const StiefelPoint c = random_stiefel(d1, d2, rng());
    Eigen::MatrixXd v = stiefel_tangent_project(c.matrix, gt::random_matrix(d1, d2, rng));
    v /= v.norm();
    const Eigen::MatrixXd grad = stiefel_tangent_project(c.matrix, egrad(c.matrix));
    const double analytic = grad.cwiseProduct(v).sum();
    const double h = 1e-5;
    const double fd = (value(stiefel_retract_qr(c.matrix + h * v)) -
                       value(stiefel_retract_qr(c.matrix - h * v))) /
                      (2.0 * h);
    CHECK(std::abs(fd - analytic) <= 1e-5 * std::max(1.0, std::abs(analytic)));
  }
}

TEST_CASE("infeasible init is rejected") {
  StiefelObjective obj = [](const Eigen::MatrixXd& c, Eigen::MatrixXd* grad) {
    if (grad) grad->setZero(c.rows(), c.cols());
    return 0.0;
  };
  CHECK_THROWS_AS(
      rgd_maximize(obj, StiefelPoint{2.0 * Eigen::MatrixXd::Identity(3, 3)}, SolverConfig{}),
      ConstraintError);
}

TEST_CASE("qr retraction fixes the sign of the R diagonal") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd m = gt::random_matrix(6, 4, rng);
    const Eigen::MatrixXd q = stiefel_retract_qr(m);
    CHECK((q.transpose() * q - Eigen::MatrixXd::Identity(4, 4)).norm() <= 1e-12);
    // R = Qᵀ(C+G) must have a positive diagonal.
    const Eigen::MatrixXd r = q.transpose() * m;
    for (int j = 0; j < 4; ++j) CHECK(r(j, j) > 0.0);
  }
}
