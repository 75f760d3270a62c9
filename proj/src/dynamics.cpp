#include "equipart/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace equipart {

double VelocityField::component(const std::vector<double>& x, double t,
                                int d) const {
  (void)t;
  switch (kind) {
    case Kind::zero:
      return 0.0;
    case Kind::constant:
      return a[d];
    case Kind::linear:
      return a[d] + b[d] * x[d];
  }
  return 0.0;
}

VelocityField VelocityField::constant(std::vector<double> c) {
  VelocityField v;
  v.kind = Kind::constant;
  v.a = std::move(c);
  return v;
}

VelocityField VelocityField::linear(std::vector<double> a, std::vector<double> b) {
  VelocityField v;
  v.kind = Kind::linear;
  v.a = std::move(a);
  v.b = std::move(b);
  return v;
}

void TransportSpec::validate() const {
  if (!(alpha >= 1.0 && alpha <= 2.0))
    throw std::invalid_argument("alpha must lie in [1, 2]");
  for (double k : friction.values)
    if (k < 0.0) throw std::invalid_argument("friction must be nonnegative");
}

double signed_pow(double x, double e) {
  if (x == 0.0) return 0.0;
  return x < 0.0 ? -std::pow(-x, e) : std::pow(x, e);
}

namespace {

// g . grad(f) with upwind one-sided differences along each axis; boundary
// cells fall back to the available one-sided difference.
GridField advection_term(const GridField& f, const VelocityField& g, double t) {
  GridField out = f;
  if (g.is_zero()) {
    for (double& v : out.values) v = 0.0;
    return out;
  }
  for (std::size_t b = 0; b < f.domain.boxes.size(); ++b) {
    const Box& box = f.domain.boxes[b];
    const auto& res = f.resolution[b];
    const int dims = box.dims();
    const std::size_t off = f.box_offset(static_cast<int>(b));
    const std::size_t cnt = f.box_cell_count(static_cast<int>(b));

    std::vector<std::size_t> stride(dims, 1);
    for (int d = dims - 2; d >= 0; --d)
      stride[d] = stride[d + 1] * static_cast<std::size_t>(res[d + 1]);

    for (std::size_t i = 0; i < cnt; ++i) {
      const std::vector<double> x = f.cell_center(static_cast<int>(b), i);
      double acc = 0.0;
      for (int d = 0; d < dims; ++d) {
        const double gd = g.component(x, t, d);
        if (gd == 0.0) continue;
        const double h = box.length(d) / res[d];
        const std::size_t id = (i / stride[d]) % static_cast<std::size_t>(res[d]);
        const bool has_prev = id > 0;
        const bool has_next = static_cast<int>(id) + 1 < res[d];
        double diff;
        if (gd > 0.0) {
          diff = has_prev
                     ? f.values[off + i] - f.values[off + i - stride[d]]
                     : (has_next
                            ? f.values[off + i + stride[d]] - f.values[off + i]
                            : 0.0);
        } else {
          diff = has_next
                     ? f.values[off + i + stride[d]] - f.values[off + i]
                     : (has_prev
                            ? f.values[off + i] - f.values[off + i - stride[d]]
                            : 0.0);
        }
        acc += gd * diff / h;
      }
      out.values[off + i] = acc;
    }
  }
  return out;
}

}  // namespace

GridField material_derivative(const GridField& now, const GridField& prev,
                              double dt, const VelocityField& g, double t) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!now.same_shape(prev)) throw std::invalid_argument("field shapes differ");
  GridField out = advection_term(now, g, t);
  for (std::size_t c = 0; c < now.values.size(); ++c)
    out.values[c] += (now.values[c] - prev.values[c]) / dt;
  return out;
}

namespace {

PhaseState step_impl(const PhaseState& state, const VariationalProblem& problem,
                     const std::vector<double>& lambdas,
                     const TransportSpec& transport, double dt, bool damped) {
  transport.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (damped) {
    if (transport.alpha != 2.0)
      throw std::invalid_argument("Rayleigh damping requires alpha = 2");
  } else if (!(transport.alpha > 1.0)) {
    throw std::invalid_argument(
        "alpha = 1 allocates instantaneously; use the static solution");
  }

  const double inv_exp = 1.0 / (transport.alpha - 1.0);
  const GridField force = functional_gradient(problem, state.S, lambdas);
  const bool floored = loss_has_pole(problem.loss);

  PhaseState next = state;
  next.t = state.t + dt;
  next.clamped = false;

  const GridField adv_pi = advection_term(state.Pi, transport.velocity, state.t);
  for (std::size_t c = 0; c < state.Pi.values.size(); ++c) {
    double dpi = -force.values[c] - adv_pi.values[c];
    if (damped) dpi -= transport.friction.values[c] * state.Pi.values[c];
    next.Pi.values[c] = state.Pi.values[c] + dt * dpi;
  }

  const GridField adv_s = advection_term(state.S, transport.velocity, state.t);
  for (std::size_t c = 0; c < state.S.values.size(); ++c) {
    double ds = signed_pow(next.Pi.values[c], inv_exp) - adv_s.values[c];
    double v = state.S.values[c] + dt * ds;
    if (floored && v < kResourceFloor) {
      v = kResourceFloor;
      next.clamped = true;
    }
    next.S.values[c] = v;
  }
  return next;
}

}  // namespace

PhaseState hamilton_step(const PhaseState& state, const VariationalProblem& problem,
                         const std::vector<double>& lambdas,
                         const TransportSpec& transport, double dt) {
  return step_impl(state, problem, lambdas, transport, dt, false);
}

PhaseState damped_step(const PhaseState& state, const VariationalProblem& problem,
                       const std::vector<double>& lambdas,
                       const TransportSpec& transport, double dt) {
  return step_impl(state, problem, lambdas, transport, dt, true);
}

GridField overdamped_step(const GridField& S, const VariationalProblem& problem,
                          const std::vector<double>& lambdas,
                          const GridField& friction, double dt,
                          bool* clamped) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  GridField rate = friction;
  for (double& k : rate.values) {
    if (!(k > 0.0))
      throw std::invalid_argument("overdamped limit needs positive friction");
    k = dt / k;
  }
  return gradient_step(problem, S, lambdas, rate, clamped);
}

double hamiltonian_energy(const PhaseState& state, const VariationalProblem& problem,
                          const std::vector<double>& lambdas, double alpha) {
  const GridField& p = problem.density.field;
  const double kinetic_exp = alpha / (alpha - 1.0);
  const double kinetic_coef = (alpha - 1.0) / alpha;
  double total = 0.0;
  for (std::size_t b = 0; b < state.S.domain.boxes.size(); ++b) {
    const double vol = state.S.cell_volume(static_cast<int>(b));
    const std::size_t off = state.S.box_offset(static_cast<int>(b));
    const std::size_t cnt = state.S.box_cell_count(static_cast<int>(b));
    double acc = 0.0;
    for (std::size_t i = 0; i < cnt; ++i) {
      const std::size_t c = off + i;
      acc += kinetic_coef * std::pow(std::fabs(state.Pi.values[c]), kinetic_exp);
      acc += p.values[c] * loss_value(problem.loss, state.S.values[c], c);
      for (std::size_t l = 0; l < problem.constraints.size(); ++l)
        acc += lambdas[l] *
               constraint_value(problem.constraints[l].kind, state.S.values[c]);
    }
    total += acc * vol;
  }
  return total;
}

double verify_legendre(const std::vector<PhaseState>& trajectory,
                       const TransportSpec& transport) {
  if (trajectory.size() < 2)
    throw std::invalid_argument("trajectory needs at least two states");
  double worst = 0.0;
  for (std::size_t s = 1; s < trajectory.size(); ++s) {
    const PhaseState& prev = trajectory[s - 1];
    const PhaseState& now = trajectory[s];
    const double dt = now.t - prev.t;
    const GridField dsdt =
        material_derivative(now.S, prev.S, dt, transport.velocity, now.t);
    for (std::size_t c = 0; c < dsdt.values.size(); ++c) {
      const double pi_implied = signed_pow(dsdt.values[c], transport.alpha - 1.0);
      worst = std::max(worst, std::fabs(now.Pi.values[c] - pi_implied));
    }
  }
  return worst;
}

}  // namespace equipart
