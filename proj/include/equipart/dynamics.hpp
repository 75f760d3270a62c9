#pragma once

#include <vector>

#include "equipart/problem.hpp"

namespace equipart {

// Coordinate velocity g(x, t): zero, a constant vector, or axis-aligned
// linear g_d(x) = a_d + b_d x_d.
struct VelocityField {
  enum class Kind { zero, constant, linear };
  Kind kind = Kind::zero;
  std::vector<double> a;
  std::vector<double> b;

  bool is_zero() const { return kind == Kind::zero; }
  double component(const std::vector<double>& x, double t, int d) const;

  static VelocityField none() { return {}; }
  static VelocityField constant(std::vector<double> c);
  static VelocityField linear(std::vector<double> a, std::vector<double> b);
};

struct TransportSpec {
  double alpha = 2.0;  // transport cost exponent, 1 <= alpha <= 2
  VelocityField velocity;
  GridField friction;  // k(x) >= 0

  void validate() const;
};

struct PhaseState {
  GridField S;
  GridField Pi;  // conjugate momentum
  double t = 0.0;
  bool clamped = false;  // floor hit during the last update
};

double signed_pow(double x, double e);

// D/Dt = (now - prev)/dt + g . grad(now), with upwind spatial differences
// against the velocity. Reduces to the plain time difference when g = 0.
GridField material_derivative(const GridField& now, const GridField& prev,
                              double dt, const VelocityField& g, double t);

// Semi-implicit (symplectic) Euler for the field equations
//   D Pi / Dt = -(p L'(S) + sum_l lambda_l f_l'(S)),
//   D S / Dt  = sign(Pi) |Pi|^(1/(alpha-1)).
// Multipliers enter as fixed constants of the dynamic Lagrangian.
PhaseState hamilton_step(const PhaseState& state, const VariationalProblem& problem,
                         const std::vector<double>& lambdas,
                         const TransportSpec& transport, double dt);

// As hamilton_step with the Rayleigh force -k(x) DS/Dt added to the momentum
// update. Requires alpha = 2, where DS/Dt = Pi.
PhaseState damped_step(const PhaseState& state, const VariationalProblem& problem,
                       const std::vector<double>& lambdas,
                       const TransportSpec& transport, double dt);

// Overdamped limit: S <- S - (dt / k(x)) (p L'(S) + sum lambda f'(S)).
// Exactly one descent step with rate dt/k; shares the solver's step kernel.
GridField overdamped_step(const GridField& S, const VariationalProblem& problem,
                          const std::vector<double>& lambdas,
                          const GridField& friction, double dt,
                          bool* clamped = nullptr);

// Discrete Hamiltonian
//   integral[ (alpha-1)/alpha |Pi|^(alpha/(alpha-1)) + p L(S) + sum lambda f(S) ].
double hamiltonian_energy(const PhaseState& state, const VariationalProblem& problem,
                          const std::vector<double>& lambdas, double alpha);

// Max over steps and cells of |Pi - sign(DS/Dt) |DS/Dt|^(alpha-1)| with DS/Dt
// from material_derivative; checks the conjugate-momentum relation along a
// trajectory of uniformly spaced states.
double verify_legendre(const std::vector<PhaseState>& trajectory,
                       const TransportSpec& transport);

}  // namespace equipart
