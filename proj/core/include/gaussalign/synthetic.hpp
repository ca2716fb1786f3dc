#pragma once

#include <cstdint>
#include <vector>

#include "gaussalign/gaussian.hpp"

namespace gaussalign {

/// p centered Gaussians on R^d with covariances A_i A_iᵀ + ridge * I, where
/// the A_i have seeded i.i.d. standard normal entries. The ensemble used by
/// the multimarginal scaling benchmark.
std::vector<Gaussian> random_covariance_ensemble(int p, int d, double ridge,
                                                 std::uint64_t seed);

/// One random Gaussian with mean scale `mean_scale` and the covariance model
/// above; convenience for tests and benchmarks.
Gaussian random_gaussian(int d, double ridge, double mean_scale, std::uint64_t seed);

}  // namespace gaussalign
