#include "mixq/order_stats.hpp"

#include <cmath>
#include <stdexcept>

namespace mixq {

ExpOrderStat::ExpOrderStat(int n, int k, double rate) : n_(n), k_(k), rate_(rate) {
  if (n < 0 || k < 0) throw std::invalid_argument("ExpOrderStat: n and k must be non-negative");
  if (!(rate > 0.0)) throw std::invalid_argument("ExpOrderStat: rate must be positive");
}

double ExpOrderStat::cdf(double v) const {
  if (v < 0.0) throw std::invalid_argument("ExpOrderStat::cdf: v must be non-negative");
  if (degenerate()) return 1.0;
  if (v == 0.0) return 0.0;

  // P = sum_{j=k}^{n} C(n,j) F^j (1-F)^{n-j} with F = 1 - exp(-rate*v).
  // Terms evaluated in log space so large n does not overflow.
  const double log_f = std::log1p(-std::exp(-rate_ * v));
  const double log_1mf = -rate_ * v;
  const double lgn = std::lgamma(n_ + 1.0);
  double p = 0.0;
  for (int j = k_; j <= n_; ++j) {
    const double log_term = lgn - std::lgamma(j + 1.0) - std::lgamma(n_ - j + 1.0) +
                            j * log_f + (n_ - j) * log_1mf;
    p += std::exp(log_term);
  }
  return p < 1.0 ? p : 1.0;
}

double ExpOrderStat::mean() const {
  if (degenerate()) return 0.0;
  double s = 0.0;
  for (int i = n_ - k_ + 1; i <= n_; ++i) s += 1.0 / i;
  return s / rate_;
}

double ExpOrderStat::second_moment() const {
  if (degenerate()) return 0.0;
  double s = 0.0;
  for (int i = n_ - k_ + 1; i <= n_; ++i) s += 1.0 / (static_cast<double>(i) * i);
  const double m = mean();
  return s / (rate_ * rate_) + m * m;
}

double ExpOrderStat::sample(RngStream& rng) const {
  if (degenerate()) return 0.0;
  // X_{n:k} = sum_{j=0}^{k-1} E_j / (n - j), E_j i.i.d. Exp(rate).
  double x = 0.0;
  for (int j = 0; j < k_; ++j) x += rng.exponential(rate_) / (n_ - j);
  return x;
}

}  // namespace mixq
