#include "mixq/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mixq {

namespace {

// Series expansion for P(a, x), valid for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x), valid for x >= a + 1.
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_q: bad arguments");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double erlang_ccdf(int shape, double rate, double w) {
  if (shape <= 0) throw std::invalid_argument("erlang_ccdf: shape must be positive");
  if (w <= 0.0) return 1.0;
  // sum_{i=0}^{shape-1} e^{-rw} (rw)^i / i!
  const double x = rate * w;
  double term = std::exp(-x);
  double sum = term;
  for (int i = 1; i < shape; ++i) {
    term *= x / i;
    sum += term;
  }
  return sum < 1.0 ? sum : 1.0;
}

double chi_square_sf(double statistic, int df) {
  if (df <= 0) throw std::invalid_argument("chi_square_sf: df must be positive");
  return gamma_q(0.5 * df, 0.5 * statistic);
}

double chi_square_test(const std::vector<double>& observed,
                       const std::vector<double>& expected) {
  if (observed.size() != expected.size() || observed.empty())
    throw std::invalid_argument("chi_square_test: size mismatch");
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] <= 0.0) throw std::invalid_argument("chi_square_test: non-positive expectation");
    const double d = observed[i] - expected[i];
    stat += d * d / expected[i];
  }
  return chi_square_sf(stat, static_cast<int>(observed.size()) - 1);
}

double ks_distance(const std::vector<double>& cdf_at_sorted_samples) {
  const std::size_t n = cdf_at_sorted_samples.size();
  if (n == 0) throw std::invalid_argument("ks_distance: empty sample");
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = cdf_at_sorted_samples[i];
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max(d, std::max(std::fabs(f - lo), std::fabs(f - hi)));
  }
  return d;
}

}  // namespace mixq
