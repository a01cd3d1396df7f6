#pragma once

#include <cstddef>
#include <vector>

namespace mixq {

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
double gamma_q(double a, double x);

/// P(Erlang(shape, rate) > w).
double erlang_ccdf(int shape, double rate, double w);

/// Survival function of a chi-square variable with `df` degrees of freedom.
double chi_square_sf(double statistic, int df);

/// Pearson chi-square p-value of observed counts against expected counts.
double chi_square_test(const std::vector<double>& observed,
                       const std::vector<double>& expected);

/// Kolmogorov-Smirnov distance between sorted samples and a CDF evaluated
/// per sample (cdf_at[i] = F(sample_i), samples ascending).
double ks_distance(const std::vector<double>& cdf_at_sorted_samples);

}  // namespace mixq
