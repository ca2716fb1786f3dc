#pragma once

#include <Eigen/Dense>
#include <random>

#include "gaussalign/gaussian.hpp"

namespace gaussalign::testing {

inline Eigen::MatrixXd random_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = normal(rng);
  }
  return m;
}

inline Eigen::MatrixXd random_symmetric(int d, std::mt19937_64& rng) {
  const Eigen::MatrixXd a = random_matrix(d, d, rng);
  return 0.5 * (a + a.transpose());
}

inline Eigen::MatrixXd random_spd(int d, std::mt19937_64& rng, double ridge = 0.1) {
  const Eigen::MatrixXd a = random_matrix(d, d, rng);
  Eigen::MatrixXd s = a * a.transpose();
  s.diagonal().array() += ridge;
  return s;
}

inline Eigen::MatrixXd random_orthogonal(int d, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(random_matrix(d, d, rng));
  return qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
}

inline Gaussian random_gaussian_nd(int d, std::mt19937_64& rng, double mean_scale = 1.0,
                                   double ridge = 0.1) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd mean(d);
  for (int i = 0; i < d; ++i) mean(i) = mean_scale * normal(rng);
  return Gaussian{mean, random_spd(d, rng, ridge)};
}

inline Gaussian random_centered_gaussian(int d, std::mt19937_64& rng,
                                         double ridge = 0.1) {
  return Gaussian{Eigen::VectorXd::Zero(d), random_spd(d, rng, ridge)};
}

/// Independent route to the centered IGW value: raw Eigen eigenvalues,
/// std::sort, zero-padded l2 distance.
inline double gbw_oracle(const Eigen::MatrixXd& cov1, const Eigen::MatrixXd& cov2) {
  const int n = static_cast<int>(std::max(cov1.rows(), cov2.rows()));
  auto padded_sorted = [n](const Eigen::MatrixXd& cov) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    std::vector<double> vals(solver.eigenvalues().data(),
                             solver.eigenvalues().data() + cov.rows());
    std::sort(vals.begin(), vals.end(), std::greater<double>());
    vals.resize(n, 0.0);
    return vals;
  };
  const auto a = padded_sorted(cov1);
  const auto b = padded_sorted(cov2);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(sum);
}

}  // namespace gaussalign::testing
