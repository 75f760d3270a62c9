#pragma once

#include <variant>
#include <vector>

#include "equipart/domain.hpp"

namespace equipart {

enum class Sense { minimize_cost, maximize_benefit };

// Cost per unit event mass as a function of the local resource level S.
struct PowerLawLoss {
  double gamma;  // L(S) = S^-gamma, gamma > 0
};
// Facility-placement objectives written against the facility density
// S = 1/V, where V is the volume served per facility. Median distance gives
// L(S) = S^(-1/N); mean-square distance gives L(S) = S^(-2/N).
struct VolumeMedianLoss {
  int dims;
};
struct VolumeMeanLoss {
  int dims;
};
// Test-harness loss with a known unconstrained optimum.
struct QuadraticLoss {
  GridField target;
};

using LossFamily =
    std::variant<PowerLawLoss, VolumeMedianLoss, VolumeMeanLoss, QuadraticLoss>;

double loss_value(const LossFamily& loss, double s, std::size_t cell);
double loss_deriv(const LossFamily& loss, double s, std::size_t cell);
bool loss_has_pole(const LossFamily& loss);
// Exponent e of the closed-form optimum S = K p^e / integral(p^e) for the
// power-type losses under a budget constraint. Throws for losses with no
// closed form.
double power_exponent(const LossFamily& loss);
void validate_loss(const LossFamily& loss);

enum class ConstraintKind {
  total_resource,  // f(S) = S
  abs_norm,        // f(S) = |S|
  square_norm,     // f(S) = S^2
  inverse_volume,  // f = V^-1 = S in the facility-density representation
};

struct ConstraintFamily {
  ConstraintKind kind;
  double target;  // K > 0
};

double constraint_value(ConstraintKind kind, double s);
double constraint_deriv(ConstraintKind kind, double s);
bool is_budget_constraint(ConstraintKind kind);

struct VariationalProblem {
  DensityField density;
  LossFamily loss;
  std::vector<ConstraintFamily> constraints;
  Sense sense = Sense::minimize_cost;

  void validate() const;
};

// Resource values are floored here when the loss has a pole at zero.
constexpr double kResourceFloor = 1e-12;

// Lagrangian value in minimize form:
//   integral(p L(S) + sum_l lambda_l f_l(S)) - sum_l lambda_l K_l.
double lagrangian_value(const VariationalProblem& problem, const GridField& S,
                        const std::vector<double>& lambdas);

// Objective alone: integral(p L(S)).
double objective_value(const VariationalProblem& problem, const GridField& S);

// Pointwise stationarity gradient p L'(S) + sum_l lambda_l f_l'(S). Its
// sup-norm is the residual of the optimality condition.
GridField functional_gradient(const VariationalProblem& problem, const GridField& S,
                              const std::vector<double>& lambdas);

double residual_sup_norm(const VariationalProblem& problem, const GridField& S,
                         const std::vector<double>& lambdas);

// One explicit descent step S <- S - rate(x) * gradient, floored when the loss
// has a pole. Shared by the static solver and the overdamped integrator so the
// two paths are step-identical.
GridField gradient_step(const VariationalProblem& problem, const GridField& S,
                        const std::vector<double>& lambdas, const GridField& rate,
                        bool* clamped = nullptr);
GridField gradient_step(const VariationalProblem& problem, const GridField& S,
                        const std::vector<double>& lambdas, double rate,
                        bool* clamped = nullptr);

std::vector<double> constraint_residuals(const VariationalProblem& problem,
                                         const GridField& S);

}  // namespace equipart
