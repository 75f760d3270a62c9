#pragma once

#include <cstddef>
#include <vector>

namespace equipart {

struct OlsFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

OlsFit ols_fit(const std::vector<double>& x, const std::vector<double>& y);

double mean(const std::vector<double>& v);
double variance(const std::vector<double>& v);  // population variance
double stddev(const std::vector<double>& v);

// Regularized incomplete gamma functions P(a, x) and Q(a, x) = 1 - P(a, x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Upper tail probability of a chi-square statistic with `dof` degrees of
// freedom; used for goodness-of-fit acceptance checks.
double chi_square_sf(double statistic, int dof);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

// Pearson test of observed counts against expected counts (same length).
ChiSquareResult chi_square_test(const std::vector<double>& observed,
                                const std::vector<double>& expected);

}  // namespace equipart
