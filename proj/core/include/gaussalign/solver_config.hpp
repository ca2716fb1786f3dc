#pragma once

#include <cstdint>

namespace gaussalign {

/// Shared knobs for the manifold solvers.
struct SolverConfig {
  int max_iters = 50;
  double grad_tol = 1e-2;
  std::uint64_t seed = 0;
  double step_init = 1.0;  // RGD trial step / RTR initial trust radius
  int restarts = 4;        // RGD random inits / RTR escape attempts

  void validate() const;
};

/// Defaults used by the IGW gamma optimization.
SolverConfig igw_rgd_defaults();

/// Defaults used by the multimarginal trust-region solve; the tight gradient
/// tolerance keeps the global-optimality certificate meaningful.
SolverConfig mmot_rtr_defaults();

}  // namespace gaussalign
