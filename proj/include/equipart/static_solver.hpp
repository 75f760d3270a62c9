#pragma once

#include <vector>

#include "equipart/problem.hpp"

namespace equipart {

struct StaticSolution {
  GridField S;
  std::vector<double> multipliers;  // minimize-form: p L'(S) + sum lambda f'(S) = 0
  double residual = 0.0;            // sup-norm of the stationarity gradient
  int iterations = 0;
  double action = 0.0;              // objective integral(p L(S))
};

// Closed-form optimum S = K p^e / integral(p^e) for power-type losses under a
// single budget constraint. Throws "no closed form" otherwise.
StaticSolution analytic_power_optimum(const VariationalProblem& problem);

// Constrained minimization by repeated descent steps (backtracking from
// eta0 = 0.1) with dual updates on the multipliers and a final exact rescale
// of budget-type constraints. Deterministic; throws on non-convergence with
// the last residual in the message.
StaticSolution solve_static(const VariationalProblem& problem,
                            const GridField& init, double tol, int max_iter);

// OLS slope of log S against log p over cells where both are positive.
double fit_scaling_exponent(const GridField& S, const DensityField& p);

}  // namespace equipart
