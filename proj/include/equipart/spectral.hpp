#pragma once

#include <vector>

#include "equipart/domain.hpp"
#include "equipart/problem.hpp"
#include "equipart/static_solver.hpp"

namespace equipart {

// Cosine-series representation of a field on a single box with zero-flux
// (Neumann) boundaries: f(x) = sum_k a_k prod_d cos(k_d pi (x_d - l_d) / L_d).
// Coefficient (0,...,0) is the field mean.
struct CosineExpansion {
  Box box;
  std::vector<int> res;    // source grid resolution per axis
  std::vector<int> modes;  // coefficient count per axis (k = 0..modes[d]-1)
  std::vector<double> coef;

  std::size_t coef_count() const;
};

// Discrete cosine transform of the cell-center samples, truncated to at most
// M modes per axis. Throws "expand per box" on multi-box domains.
CosineExpansion cosine_expand(const DensityField& p, int M);
CosineExpansion cosine_expand_field(const GridField& f, int M);

// Scale mode k by exp(-pi^2 sum_d (k_d / L_d)^2 t). Mass (the DC mode) is
// untouched; t -> infinity leaves the uniform mean.
CosineExpansion heat_decay(const CosineExpansion& e, double t);

// Evolved density sampled back onto the source grid. Tiny truncation
// negatives are clamped and the mass renormalized.
DensityField heat_evolve(const CosineExpansion& e, double t);

GridField synthesize(const CosineExpansion& e);
// Partial derivative along one axis, synthesized on the source grid.
GridField synthesize_derivative(const CosineExpansion& e, int axis);

// Advect points along the probability-flux velocity v = -grad q / q of the
// diffusing density (explicit midpoint stepping). Points reflect at box walls,
// consistent with the zero-flux boundary.
std::vector<std::vector<double>> transform_points(
    const DensityField& p, const std::vector<std::vector<double>>& points,
    double t_final, int steps);

// Flatness of the constraint-weighted marginal benefit across the domain, in
// units where the stationarity condition makes it proportional to the event
// density: r(x) = sum_l lambda_l f_l'(S) / (-L'(S) p(x)) on cells with p > 0,
// returned as (max r - min r) / |mean r|. Zero at any exact optimum.
double equipartition_residual(const VariationalProblem& problem,
                              const StaticSolution& solution);

struct InverseCandidateScore {
  int density_index = 0;
  int model_index = 0;
  double norm = 0.0;
};

struct InverseSelection {
  int density_index = 0;
  int model_index = 0;
  std::vector<InverseCandidateScore> ranking;  // ascending by norm
};

// Given an observed resource field Y and candidate (density, power-law model)
// pairs, pick the combination whose fitted model leaves the flattest diffused
// discrepancy: fit Y ~ a + c p_i^{e_j} by least squares, diffuse the residual
// for a fixed time (0.5 on the unit box, scaled by L^2), and return the
// argmin of the lattice L1 norm of the forward-difference gradient. Ties are
// broken lexicographically by (density, model) index.
InverseSelection inverse_select(const GridField& Y,
                                const std::vector<DensityField>& densities,
                                const std::vector<LossFamily>& models);

}  // namespace equipart
