#pragma once

#include <functional>
#include <vector>

namespace gcm {

struct NmOptions {
  int max_evals = 2000;
  double init_step_rel = 0.10;   // simplex leg: rel*|x0_i|, or abs below when ~0
  double init_step_abs = 0.02;
  double ftol_abs = 1e-9;        // simplex f-spread threshold: abs + rel*|fbest|
  double ftol_rel = 1e-9;
  double xtol = 1e-9;            // simplex edge length
  int max_restarts = 4;          // restart-on-stall with halved steps
};

struct NmResult {
  std::vector<double> x;
  double fval = 0.0;
  int evals = 0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> best_trace;  // best-so-far objective, non-increasing
};

// Derivative-free simplex minimizer (reflection/expansion/contraction/
// shrink), deterministic for a given start point and options.
NmResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                     const std::vector<double>& x0, const NmOptions& opt = {});

}  // namespace gcm
