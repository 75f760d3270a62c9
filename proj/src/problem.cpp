#include "equipart/problem.hpp"

#include <cmath>
#include <stdexcept>

namespace equipart {

double loss_value(const LossFamily& loss, double s, std::size_t cell) {
  return std::visit(
      [&](const auto& l) -> double {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, PowerLawLoss>) {
          return std::pow(s, -l.gamma);
        } else if constexpr (std::is_same_v<T, VolumeMedianLoss>) {
          return std::pow(s, -1.0 / l.dims);
        } else if constexpr (std::is_same_v<T, VolumeMeanLoss>) {
          return std::pow(s, -2.0 / l.dims);
        } else {
          const double d = s - l.target.values[cell];
          return d * d;
        }
      },
      loss);
}

double loss_deriv(const LossFamily& loss, double s, std::size_t cell) {
  return std::visit(
      [&](const auto& l) -> double {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, PowerLawLoss>) {
          return -l.gamma * std::pow(s, -l.gamma - 1.0);
        } else if constexpr (std::is_same_v<T, VolumeMedianLoss>) {
          const double g = 1.0 / l.dims;
          return -g * std::pow(s, -g - 1.0);
        } else if constexpr (std::is_same_v<T, VolumeMeanLoss>) {
          const double g = 2.0 / l.dims;
          return -g * std::pow(s, -g - 1.0);
        } else {
          return 2.0 * (s - l.target.values[cell]);
        }
      },
      loss);
}

bool loss_has_pole(const LossFamily& loss) {
  return !std::holds_alternative<QuadraticLoss>(loss);
}

double power_exponent(const LossFamily& loss) {
  return std::visit(
      [](const auto& l) -> double {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, PowerLawLoss>) {
          return 1.0 / (l.gamma + 1.0);
        } else if constexpr (std::is_same_v<T, VolumeMedianLoss>) {
          return static_cast<double>(l.dims) / (l.dims + 1.0);
        } else if constexpr (std::is_same_v<T, VolumeMeanLoss>) {
          return static_cast<double>(l.dims) / (l.dims + 2.0);
        } else {
          throw std::invalid_argument("no closed form");
        }
      },
      loss);
}

void validate_loss(const LossFamily& loss) {
  std::visit(
      [](const auto& l) {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, PowerLawLoss>) {
          if (!(l.gamma > 0.0))
            throw std::invalid_argument("power-law exponent must be positive");
        } else if constexpr (std::is_same_v<T, VolumeMedianLoss> ||
                             std::is_same_v<T, VolumeMeanLoss>) {
          if (l.dims < 1)
            throw std::invalid_argument("dimension must be >= 1");
        } else {
          l.target.validate();
        }
      },
      loss);
}

double constraint_value(ConstraintKind kind, double s) {
  switch (kind) {
    case ConstraintKind::total_resource:
    case ConstraintKind::inverse_volume:
      return s;
    case ConstraintKind::abs_norm:
      return std::fabs(s);
    case ConstraintKind::square_norm:
      return s * s;
  }
  throw std::logic_error("unknown constraint kind");
}

double constraint_deriv(ConstraintKind kind, double s) {
  switch (kind) {
    case ConstraintKind::total_resource:
    case ConstraintKind::inverse_volume:
      return 1.0;
    case ConstraintKind::abs_norm:
      return s < 0.0 ? -1.0 : 1.0;
    case ConstraintKind::square_norm:
      return 2.0 * s;
  }
  throw std::logic_error("unknown constraint kind");
}

bool is_budget_constraint(ConstraintKind kind) {
  return kind == ConstraintKind::total_resource ||
         kind == ConstraintKind::inverse_volume;
}

void VariationalProblem::validate() const {
  density.field.validate();
  validate_loss(loss);
  if (constraints.empty())
    throw std::invalid_argument("problem needs at least one constraint");
  for (const auto& c : constraints)
    if (!(c.target > 0.0))
      throw std::invalid_argument("constraint target must be positive");
}

namespace {

double sense_sign(const VariationalProblem& p) {
  return p.sense == Sense::minimize_cost ? 1.0 : -1.0;
}

}  // namespace

double lagrangian_value(const VariationalProblem& problem, const GridField& S,
                        const std::vector<double>& lambdas) {
  const GridField& p = problem.density.field;
  const double sign = sense_sign(problem);
  double total = 0.0;
  for (std::size_t b = 0; b < S.domain.boxes.size(); ++b) {
    const double vol = S.cell_volume(static_cast<int>(b));
    const std::size_t off = S.box_offset(static_cast<int>(b));
    const std::size_t cnt = S.box_cell_count(static_cast<int>(b));
    double acc = 0.0;
    for (std::size_t i = 0; i < cnt; ++i) {
      const std::size_t c = off + i;
      double term = sign * p.values[c] * loss_value(problem.loss, S.values[c], c);
      for (std::size_t l = 0; l < problem.constraints.size(); ++l)
        term += lambdas[l] *
                constraint_value(problem.constraints[l].kind, S.values[c]);
      acc += term;
    }
    total += acc * vol;
  }
  for (std::size_t l = 0; l < problem.constraints.size(); ++l)
    total -= lambdas[l] * problem.constraints[l].target;
  return total;
}

double objective_value(const VariationalProblem& problem, const GridField& S) {
  const GridField& p = problem.density.field;
  double total = 0.0;
  for (std::size_t b = 0; b < S.domain.boxes.size(); ++b) {
    const double vol = S.cell_volume(static_cast<int>(b));
    const std::size_t off = S.box_offset(static_cast<int>(b));
    const std::size_t cnt = S.box_cell_count(static_cast<int>(b));
    double acc = 0.0;
    for (std::size_t i = 0; i < cnt; ++i) {
      const std::size_t c = off + i;
      acc += p.values[c] * loss_value(problem.loss, S.values[c], c);
    }
    total += acc * vol;
  }
  return total;
}

GridField functional_gradient(const VariationalProblem& problem, const GridField& S,
                              const std::vector<double>& lambdas) {
  if (lambdas.size() != problem.constraints.size())
    throw std::invalid_argument("multiplier count mismatch");
  const GridField& p = problem.density.field;
  const double sign = sense_sign(problem);
  GridField g = S;
  for (std::size_t c = 0; c < S.values.size(); ++c) {
    double v = sign * p.values[c] * loss_deriv(problem.loss, S.values[c], c);
    for (std::size_t l = 0; l < problem.constraints.size(); ++l)
      v += lambdas[l] * constraint_deriv(problem.constraints[l].kind, S.values[c]);
    g.values[c] = v;
  }
  return g;
}

double residual_sup_norm(const VariationalProblem& problem, const GridField& S,
                         const std::vector<double>& lambdas) {
  const GridField g = functional_gradient(problem, S, lambdas);
  double m = 0.0;
  for (double v : g.values) m = std::max(m, std::fabs(v));
  return m;
}

GridField gradient_step(const VariationalProblem& problem, const GridField& S,
                        const std::vector<double>& lambdas, const GridField& rate,
                        bool* clamped) {
  const GridField g = functional_gradient(problem, S, lambdas);
  const bool floored = loss_has_pole(problem.loss);
  GridField out = S;
  bool hit = false;
  for (std::size_t c = 0; c < S.values.size(); ++c) {
    double v = S.values[c] - rate.values[c] * g.values[c];
    if (floored && v < kResourceFloor) {
      v = kResourceFloor;
      hit = true;
    }
    out.values[c] = v;
  }
  if (clamped) *clamped = hit;
  return out;
}

GridField gradient_step(const VariationalProblem& problem, const GridField& S,
                        const std::vector<double>& lambdas, double rate,
                        bool* clamped) {
  GridField r = S;
  for (double& v : r.values) v = rate;
  return gradient_step(problem, S, lambdas, r, clamped);
}

std::vector<double> constraint_residuals(const VariationalProblem& problem,
                                         const GridField& S) {
  std::vector<double> res(problem.constraints.size(), 0.0);
  for (std::size_t l = 0; l < problem.constraints.size(); ++l) {
    GridField f = S;
    for (std::size_t c = 0; c < S.values.size(); ++c)
      f.values[c] = constraint_value(problem.constraints[l].kind, S.values[c]);
    res[l] = integrate(f) - problem.constraints[l].target;
  }
  return res;
}

}  // namespace equipart
