#pragma once

#include <span>

namespace gapbench::stats {

// I_x(a, b), continued-fraction evaluation (modified Lentz) with the
// symmetry switch at x = (a + 1) / (a + b + 2). Throws Domain for a, b <= 0
// or x outside [0, 1].
double regularized_incomplete_beta(double a, double b, double x);

// P(T >= t) for Student's t with df degrees of freedom (df >= 1, may be
// fractional). Throws Domain for df < 1 or NaN t.
double t_sf(double t, double df);
// P(T <= t).
double t_cdf(double t, double df);
// Inverse CDF by bracketed bisection on t_sf. Throws Domain unless 0 < p < 1.
double t_quantile(double p, double df);

struct TTestResult {
  int n = 0;
  double mean = 0.0;
  double sd = 0.0;  // n - 1 denominator
  double se = 0.0;
  double t_stat = 0.0;
  int df = 0;
  double p_one_tailed = 0.0;    // upper tail, P(T >= t)
  double p_lower_tailed = 0.0;  // P(T <= t), computed directly
  double p_two_tailed = 0.0;
  double ci_lo = 0.0;  // 95%
  double ci_hi = 0.0;

  friend bool operator==(const TTestResult&, const TTestResult&) = default;
};

// H0: mean = 0. Throws InsufficientData for n < 2, DegenerateSample when
// every value is identical.
TTestResult one_sample_t(std::span<const double> values);

}  // namespace gapbench::stats
