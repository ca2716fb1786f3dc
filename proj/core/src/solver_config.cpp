#include "gaussalign/solver_config.hpp"

#include "gaussalign/errors.hpp"

namespace gaussalign {

void SolverConfig::validate() const {
  if (max_iters < 0) throw RangeError("SolverConfig: max_iters must be >= 0");
  if (grad_tol <= 0.0) throw RangeError("SolverConfig: grad_tol must be > 0");
  if (step_init <= 0.0) throw RangeError("SolverConfig: step_init must be > 0");
  if (restarts < 0) throw RangeError("SolverConfig: restarts must be >= 0");
}

SolverConfig igw_rgd_defaults() {
  SolverConfig cfg;
  cfg.max_iters = 50;
  cfg.grad_tol = 1e-2;
  cfg.step_init = 1.0;
  cfg.restarts = 4;
  return cfg;
}

SolverConfig mmot_rtr_defaults() {
  SolverConfig cfg;
  cfg.max_iters = 500;
  cfg.grad_tol = 1e-6;
  cfg.step_init = 1.0;
  cfg.restarts = 3;
  return cfg;
}

}  // namespace gaussalign
