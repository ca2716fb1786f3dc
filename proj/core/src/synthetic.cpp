#include "gaussalign/synthetic.hpp"

#include <random>

#include "gaussalign/errors.hpp"

namespace gaussalign {

std::vector<Gaussian> random_covariance_ensemble(int p, int d, double ridge,
                                                 std::uint64_t seed) {
  if (p < 1 || d < 1) throw RangeError("random_covariance_ensemble: p, d must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Gaussian> out;
  out.reserve(p);
  for (int i = 0; i < p; ++i) {
    Eigen::MatrixXd a(d, d);
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) a(r, c) = normal(rng);
    }
    Eigen::MatrixXd cov = a * a.transpose();
    cov.diagonal().array() += ridge;
    out.push_back(Gaussian{Eigen::VectorXd::Zero(d), std::move(cov)});
  }
  return out;
}

Gaussian random_gaussian(int d, double ridge, double mean_scale, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd mean(d);
  for (int i = 0; i < d; ++i) mean(i) = mean_scale * normal(rng);
  Eigen::MatrixXd a(d, d);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) a(r, c) = normal(rng);
  }
  Eigen::MatrixXd cov = a * a.transpose();
  cov.diagonal().array() += ridge;
  return Gaussian{std::move(mean), std::move(cov)};
}

}  // namespace gaussalign
