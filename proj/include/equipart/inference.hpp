#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "equipart/rng.hpp"

namespace equipart {

struct DirichletPosterior {
  std::vector<double> alpha;       // prior concentration, all > 0
  std::vector<long long> counts;   // observation counts per category
  long long total = 0;

  int categories() const { return static_cast<int>(alpha.size()); }
};

DirichletPosterior make_posterior(std::vector<double> alpha);
void posterior_update(DirichletPosterior& post, int category);  // 0-based
// Predictive probability of each category: (alpha_i + n_i) / (N + sum alpha).
std::vector<double> posterior_predictive(const DirichletPosterior& post);

// Explicit Euler step of the discrete allocation flow
//   dS_i/dt = phat_i S_i^-2 - ((1/K) sum_j sqrt(phat_j))^2,
// whose fixed point is the closed-form optimum S_i = K sqrt(phat_i)/sum sqrt.
std::vector<double> dynamic_allocation_step(const std::vector<double>& S,
                                            const std::vector<double>& predictive,
                                            double K, double dt,
                                            bool* clamped = nullptr);

// Time-ordered observations with strictly increasing times.
struct ObservationStream {
  struct Record {
    double x;
    double t;
  };
  std::vector<Record> records;

  void append(double x, double t);
};

// Pooled Gaussian kernel estimate over (x, t) pairs:
//   G(x, t) = (1/N) sum_k (1/(2 pi h)) exp(-((x-x_k)^2 + (t-t_k)^2) / (2h)).
struct SpacetimeKDE {
  std::vector<std::pair<double, double>> samples;  // (x, t)
  double bandwidth = 0.1;
};

void kde_insert(SpacetimeKDE& kde, double x, double t);
double kde_eval(const SpacetimeKDE& kde, double x, double t);

// Shrinking bandwidth h = c N^(-1/3); h -> 0 as the sample grows, as the
// convergence of the estimate requires.
double bandwidth_schedule(std::size_t n, double c = 0.5);

struct WienerSpec {
  double mu = 0.0;
  double sigma = 1.0;  // > 0
  double x0 = 0.0;
};

// Transition density H(t)/sqrt(2 pi sigma^2 t) exp(-(x - x0 - mu t)^2 / (2 sigma^2 t)).
double wiener_density(const WienerSpec& spec, double x, double t);

// Exact-increment simulation X_{t+dt} = X_t + mu dt + sigma sqrt(dt) Z; one
// derived stream per path. Records are (t, x) starting at t = dt.
std::vector<std::vector<std::pair<double, double>>> wiener_sample_paths(
    const WienerSpec& spec, int n_paths, double dt, double T, std::uint64_t seed);

// --- experiment drivers shared by the CLI and the acceptance suite ---

struct CategoricalRunResult {
  std::vector<double> times;
  std::vector<std::vector<double>> predictive_trace;
  std::vector<std::vector<double>> allocation_trace;
  std::vector<double> final_predictive;
  std::vector<double> final_allocation;
  std::vector<double> static_optimum;  // for the true distribution
};

// Stream n_obs categorical draws from `truth`, updating the posterior after
// each and advancing the allocation flow by euler_per_obs Euler steps between
// observations.
CategoricalRunResult run_categorical_allocation(
    const std::vector<double>& truth, std::vector<double> alpha0,
    std::vector<double> S0, double K, double dt, int euler_per_obs, int n_obs,
    std::uint64_t seed, int trace_every = 0);

struct KdeExperimentResult {
  std::size_t n_samples = 0;
  double bandwidth = 0.0;
  double l1_error = 0.0;
};

// L1 distance between the pooled-path KDE and the exact transition density on
// a fixed (x, t) grid.
KdeExperimentResult kde_wiener_l1(const WienerSpec& spec, int n_paths,
                                  int records_per_path, std::uint64_t seed,
                                  double x_lo, double x_hi, int x_bins,
                                  double t_lo, double t_hi, int t_bins);

}  // namespace equipart
