#pragma once

#include "mixq/rng.hpp"

namespace mixq {

/// k-th order statistic of n i.i.d. Exp(rate) variables.
///
/// The degenerate combinations (k = 0 or n < k) are a genuine point mass at
/// zero rather than an error, so that mixture formulas built on top of this
/// type evaluate uniformly over their index ranges.
class ExpOrderStat {
 public:
  ExpOrderStat(int n, int k, double rate);

  int n() const { return n_; }
  int k() const { return k_; }
  double rate() const { return rate_; }

  bool degenerate() const { return k_ == 0 || n_ < k_; }

  /// P(X <= v). Throws std::invalid_argument for v < 0.
  double cdf(double v) const;

  /// Exact mean via the spacings representation: (1/rate) * sum_{i=n-k+1}^{n} 1/i.
  double mean() const;

  /// Exact second moment (spacings variance plus squared mean).
  double second_moment() const;

  /// Draw one sample as a sum of independent exponential spacings.
  double sample(RngStream& rng) const;

 private:
  int n_;
  int k_;
  double rate_;
};

}  // namespace mixq
