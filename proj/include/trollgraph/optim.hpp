#pragma once

#include <functional>
#include <string>
#include <vector>

namespace trollgraph {

struct ObjectiveEvaluation {
  double value = 0.0;
  std::vector<double> gradient;
};

using Objective = std::function<ObjectiveEvaluation(const std::vector<double>&)>;

struct OptimConfig {
  int memory_pairs = 10;             // L-BFGS history size
  int max_iterations = 500;
  double gradient_tolerance = 1e-6;  // stop when max-norm of gradient < tol
  double sufficient_decrease = 1e-4; // Armijo constant c1
  double curvature = 0.9;            // strong Wolfe constant c2
  int max_line_search = 60;          // function evaluations per line search
};

struct MinimizeResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string message;
  std::vector<double> trace;  // objective at x0 and after each accepted step
};

// Two-loop-recursion L-BFGS with a strong Wolfe line search. Accepted steps
// satisfy sufficient decrease and curvature, so objective values are
// nonincreasing. A failed line search falls back to one steepest-descent
// restart; a second failure stops with a diagnostic. Non-finite objective or
// gradient values throw.
MinimizeResult minimize(const Objective& objective, std::vector<double> x0,
                        const OptimConfig& config = {});

}  // namespace trollgraph
