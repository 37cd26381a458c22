#include "gapbench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gapbench/error.hpp"

namespace gapbench::stats {

namespace {

constexpr int kMaxIterations = 10000;
constexpr double kEpsilon = 1e-16;
constexpr double kTiny = 1e-300;

// Continued fraction part of I_x(a, b).
double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEpsilon) return h;
  }
  throw Error(ErrorKind::Invariant, "incomplete beta continued fraction did not converge");
}

// y = 1 - x, passed separately so t_sf can compute it without cancellation.
double incomplete_beta(double a, double b, double x, double y) {
  if (x <= 0.0) return 0.0;
  if (y <= 0.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log(y);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return std::exp(log_front) * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - std::exp(log_front) * beta_continued_fraction(b, a, y) / b;
}

void check_df(double df) {
  if (!(df >= 1.0) || std::isinf(df)) {
    throw Error(ErrorKind::Domain, "degrees of freedom must be >= 1, got " + std::to_string(df));
  }
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0) || !(x >= 0.0 && x <= 1.0)) {
    throw Error(ErrorKind::Domain, "incomplete beta arguments out of range");
  }
  return incomplete_beta(a, b, x, 1.0 - x);
}

double t_sf(double t, double df) {
  check_df(df);
  if (std::isnan(t)) throw Error(ErrorKind::Domain, "t is NaN");
  if (t == 0.0) return 0.5;
  const double t2 = t * t;
  double tail = 0.0;
  if (std::isfinite(t2)) {
    const double denom = df + t2;
    tail = 0.5 * incomplete_beta(0.5 * df, 0.5, df / denom, t2 / denom);
  }
  return t > 0.0 ? tail : 1.0 - tail;
}

double t_cdf(double t, double df) { return t_sf(-t, df); }

double t_quantile(double p, double df) {
  check_df(df);
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorKind::Domain, "quantile probability must be in (0, 1), got " +
                                       std::to_string(p));
  }
  if (p == 0.5) return 0.0;
  if (p < 0.5) return -t_quantile(1.0 - p, df);

  const double upper = 1.0 - p;
  double lo = 0.0;
  double hi = 1.0;
  while (t_sf(hi, df) > upper) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw Error(ErrorKind::Domain, "quantile out of range");
  }
  for (int i = 0; i < 2000 && hi - lo > 1e-13 * std::max(1.0, hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (t_sf(mid, df) > upper) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

TTestResult one_sample_t(std::span<const double> values) {
  if (values.size() < 2) {
    throw Error(ErrorKind::InsufficientData,
                "one-sample t-test needs n >= 2, got " + std::to_string(values.size()));
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidInput, "non-finite sample value");
  }
  if (std::all_of(values.begin(), values.end(),
                  [&](double v) { return v == values.front(); })) {
    throw Error(ErrorKind::DegenerateSample, "all sample values are identical");
  }

  TTestResult r;
  r.n = static_cast<int>(values.size());
  r.df = r.n - 1;
  double sum = 0.0;
  for (double v : values) sum += v;
  r.mean = sum / r.n;
  double ss = 0.0;
  for (double v : values) ss += (v - r.mean) * (v - r.mean);
  r.sd = std::sqrt(ss / r.df);
  r.se = r.sd / std::sqrt(static_cast<double>(r.n));
  r.t_stat = r.mean / r.se;
  r.p_one_tailed = t_sf(r.t_stat, r.df);
  r.p_lower_tailed = t_sf(-r.t_stat, r.df);
  r.p_two_tailed = std::min(1.0, 2.0 * std::min(r.p_one_tailed, r.p_lower_tailed));
  const double critical = t_quantile(0.975, r.df);
  r.ci_lo = r.mean - critical * r.se;
  r.ci_hi = r.mean + critical * r.se;
  return r;
}

}  // namespace gapbench::stats
