#include "equipart/static_solver.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "equipart/stats.hpp"

namespace equipart {

namespace {

int single_budget_index(const VariationalProblem& problem) {
  if (problem.constraints.size() != 1) return -1;
  return is_budget_constraint(problem.constraints.front().kind) ? 0 : -1;
}

// Exact rescale so that integral(S) = K. Valid for the linear budget
// constraints only.
void rescale_budget(GridField& S, double K) {
  const double total = integrate(S);
  if (total <= 0.0) throw std::runtime_error("cannot rescale nonpositive field");
  const double c = K / total;
  for (double& v : S.values) v *= c;
}

// Minimize the Lagrangian at fixed multipliers by backtracked descent.
// Returns the number of steps taken.
int minimize_inner(const VariationalProblem& problem, GridField& S,
                   const std::vector<double>& lambdas, double grad_tol,
                   int step_budget) {
  double value = lagrangian_value(problem, S, lambdas);
  int steps = 0;
  while (steps < step_budget) {
    const GridField g = functional_gradient(problem, S, lambdas);
    double sup = 0.0;
    for (double v : g.values) sup = std::max(sup, std::fabs(v));
    if (sup <= grad_tol) break;

    double eta = 0.1;
    bool moved = false;
    for (int halvings = 0; halvings < 60; ++halvings) {
      GridField trial = gradient_step(problem, S, lambdas, eta);
      const double trial_value = lagrangian_value(problem, trial, lambdas);
      if (trial_value < value) {
        S = std::move(trial);
        value = trial_value;
        moved = true;
        break;
      }
      eta *= 0.5;
    }
    ++steps;
    if (!moved) break;  // step size exhausted at this accuracy
  }
  return steps;
}

}  // namespace

StaticSolution analytic_power_optimum(const VariationalProblem& problem) {
  problem.validate();
  const int budget_idx = single_budget_index(problem);
  if (budget_idx < 0)
    throw std::invalid_argument("no closed form");
  const double e = power_exponent(problem.loss);  // throws for quadratic
  const double K = problem.constraints.front().target;

  const GridField& p = problem.density.field;
  GridField S = p;
  for (double& v : S.values) v = std::pow(v, e);
  const double norm = integrate(S);
  if (norm <= 0.0) throw std::invalid_argument("degenerate density");
  for (double& v : S.values) {
    v *= K / norm;
    if (v < kResourceFloor) v = kResourceFloor;
  }

  // Stationarity p L'(S) + lambda = 0 holds with one constant multiplier:
  // lambda = g_eff (I/K)^(g_eff + 1) where g_eff = 1/e - 1.
  const double g_eff = 1.0 / e - 1.0;
  const double lambda = g_eff * std::pow(norm / K, g_eff + 1.0);

  StaticSolution sol;
  sol.S = std::move(S);
  sol.multipliers = {lambda};
  sol.residual = residual_sup_norm(problem, sol.S, sol.multipliers);
  sol.iterations = 0;
  sol.action = objective_value(problem, sol.S);
  return sol;
}

StaticSolution solve_static(const VariationalProblem& problem,
                            const GridField& init, double tol, int max_iter) {
  problem.validate();
  init.validate();
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (loss_has_pole(problem.loss) && init.min_value() <= kResourceFloor)
    throw std::invalid_argument("initial field must be strictly above the floor");

  GridField S = init;
  const std::size_t m = problem.constraints.size();
  std::vector<double> lambdas(m, 0.0);

  const int budget_idx = single_budget_index(problem);
  const bool power_loss = loss_has_pole(problem.loss);

  // Multiplier start: volume-mean of -p L'(init) for pole-type losses keeps
  // the inner problem bounded below.
  if (budget_idx == 0 && power_loss) {
    const GridField g0 = functional_gradient(problem, S, lambdas);
    double acc = 0.0;
    for (std::size_t b = 0; b < S.domain.boxes.size(); ++b) {
      const double vol = S.cell_volume(static_cast<int>(b));
      const std::size_t off = S.box_offset(static_cast<int>(b));
      const std::size_t cnt = S.box_cell_count(static_cast<int>(b));
      for (std::size_t i = 0; i < cnt; ++i) acc -= g0.values[off + i] * vol;
    }
    lambdas[0] = std::max(acc / S.domain.volume(), 1e-10);
  }

  int total_steps = 0;
  const double feas_tol = 1e-10;
  const double inner_tol = 0.5 * tol;
  double last_residual = std::numeric_limits<double>::infinity();

  // Bracket state for the single-budget dual solve: residual r(lambda) =
  // integral(S(lambda)) - K is strictly decreasing in lambda.
  double lam_lo = 0.0, lam_hi = 0.0, r_lo = 0.0, r_hi = 0.0;
  bool have_lo = false, have_hi = false;

  std::vector<double> dual_rate(m, 0.0);
  std::vector<double> prev_res(m, 0.0);
  for (std::size_t l = 0; l < m; ++l)
    dual_rate[l] = 1.0 / problem.constraints[l].target;

  const int max_outer = 200;
  for (int outer = 0; outer < max_outer; ++outer) {
    total_steps += minimize_inner(problem, S, lambdas, inner_tol,
                                  max_iter - total_steps);
    const std::vector<double> res = constraint_residuals(problem, S);
    last_residual = residual_sup_norm(problem, S, lambdas);

    bool feasible = true;
    for (std::size_t l = 0; l < m; ++l)
      if (std::fabs(res[l]) > feas_tol * problem.constraints[l].target)
        feasible = false;

    if (feasible && last_residual <= tol) {
      if (budget_idx == 0)
        rescale_budget(S, problem.constraints.front().target);
      StaticSolution sol;
      sol.S = std::move(S);
      sol.multipliers = lambdas;
      sol.residual = residual_sup_norm(problem, sol.S, lambdas);
      sol.iterations = total_steps;
      sol.action = objective_value(problem, sol.S);
      return sol;
    }
    if (total_steps >= max_iter) break;

    if (budget_idx == 0) {
      // Dual ascent with a bracketed, residual-scaled step.
      const double r = res[0];
      if (r > 0.0) {
        lam_lo = lambdas[0];
        r_lo = r;
        have_lo = true;
      } else {
        lam_hi = lambdas[0];
        r_hi = r;
        have_hi = true;
      }
      if (have_lo && have_hi) {
        // Regula falsi with a bisection guard.
        double next = lam_hi - r_hi * (lam_hi - lam_lo) / (r_hi - r_lo);
        const double mid = 0.5 * (lam_lo + lam_hi);
        if (!(next > lam_lo && next < lam_hi)) next = mid;
        lambdas[0] = next;
      } else if (have_lo) {
        lambdas[0] = (lambdas[0] > 0.0) ? lambdas[0] * 4.0 : 1.0;
      } else {
        lambdas[0] = lambdas[0] * 0.25;
      }
      if (power_loss) lambdas[0] = std::max(lambdas[0], 1e-14);
    } else {
      // Generic adaptive dual ascent: lambda_l += eta_l * residual_l.
      for (std::size_t l = 0; l < m; ++l) {
        if (outer > 0 && res[l] * prev_res[l] < 0.0)
          dual_rate[l] *= 0.5;
        else if (outer > 0)
          dual_rate[l] *= 1.2;
        lambdas[l] += dual_rate[l] * res[l];
        prev_res[l] = res[l];
      }
    }
  }

  std::ostringstream msg;
  msg << "solve_static did not converge: residual " << last_residual << " after "
      << total_steps << " steps";
  throw std::runtime_error(msg.str());
}

double fit_scaling_exponent(const GridField& S, const DensityField& p) {
  if (!S.same_shape(p.field))
    throw std::invalid_argument("field shapes differ");
  std::vector<double> logp, logs;
  for (std::size_t c = 0; c < S.values.size(); ++c) {
    if (S.values[c] > 0.0 && p.field.values[c] > 0.0) {
      logp.push_back(std::log(p.field.values[c]));
      logs.push_back(std::log(S.values[c]));
    }
  }
  if (logp.size() < 10)
    throw std::invalid_argument("need at least 10 cells with positive S and p");
  double lo = logp[0], hi = logp[0];
  for (double v : logp) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi == lo) throw std::invalid_argument("degenerate fit");
  return ols_fit(logp, logs).slope;
}

}  // namespace equipart
