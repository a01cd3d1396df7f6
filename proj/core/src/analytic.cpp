#include "mixq/analytic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mixq/order_stats.hpp"
#include "mixq/stats.hpp"

namespace mixq {

void BatchMixParams::validate() const {
  if (n < 2) throw std::invalid_argument("BatchMixParams: n must be at least 2");
  if (k < 2 || k > n) throw std::invalid_argument("BatchMixParams: need 2 <= k <= n");
  if (!(rate > 0.0)) throw std::invalid_argument("BatchMixParams: rate must be positive");
}

void SamplingMixParams::validate() const {
  if (n < 2) throw std::invalid_argument("SamplingMixParams: n must be at least 2");
  if (k < 1 || k > n - 1) throw std::invalid_argument("SamplingMixParams: need 1 <= k <= n-1");
  if (!(rate > 0.0)) throw std::invalid_argument("SamplingMixParams: rate must be positive");
  if (p_a < 0.0 || p_a > 1.0) throw std::invalid_argument("SamplingMixParams: p_a must be in [0,1]");
}

double N2Stationary::p(int l) const {
  if (l < 0) throw std::invalid_argument("N2Stationary::p: negative state");
  if (l == 0) return p0;
  return coeff * std::pow(tail_base, l + 1);
}

namespace {

void require_n2(const BatchMixParams& params) {
  params.validate();
  if (params.k != 2) throw std::invalid_argument("n2 analysis requires k = 2");
  if (params.n <= 2) throw std::invalid_argument("n2 analysis requires n > 2 (the (2,2) mix is unstable)");
}

}  // namespace

N2Stationary n2_stationary(const BatchMixParams& params) {
  require_n2(params);
  const double n = params.n;
  N2Stationary s;
  s.n = params.n;
  s.p0 = (n - 2.0) / (2.0 * (n - 1.0));
  s.tail_base = 1.0 / (n - 1.0);
  s.coeff = n * (n - 2.0) / 2.0;
  return s;
}

N2Moments n2_moments(const BatchMixParams& params) {
  require_n2(params);
  const double n = params.n;
  N2Moments m;
  m.mean_len = 1.0 / (2.0 * (n - 2.0));
  m.second_len = n / (2.0 * (n - 2.0) * (n - 2.0));
  // (1 - p0)/n.  The closed form 1/(2(n-1)) is confirmed by the truncated
  // birth-death chain solve in the test suite.
  m.load = 1.0 / (2.0 * (n - 1.0));
  return m;
}

double n2_delay_ccdf(const BatchMixParams& params, double w) {
  require_n2(params);
  if (w < 0.0) throw std::invalid_argument("n2_delay_ccdf: w must be non-negative");
  const N2Stationary s = n2_stationary(params);
  const double mu = (params.n - 1.0) * params.rate;

  double ccdf = s.p0 * std::exp(-mu * w);
  // Geometric tail: remaining mass after state l is coeff * base^{l+2} / (1 - base).
  for (int l = 1;; ++l) {
    const double pl = s.p(l);
    ccdf += pl * erlang_ccdf(l + 1, mu, w) / params.n;
    const double remaining = s.coeff * std::pow(s.tail_base, l + 2) / (1.0 - s.tail_base);
    if (remaining < 1e-12) break;
  }
  return ccdf;
}

double n2_mean_delay(const BatchMixParams& params) {
  require_n2(params);
  const N2Stationary s = n2_stationary(params);
  const double n = params.n;
  const double mu = (n - 1.0) * params.rate;
  // integral of the CCDF: each Erlang(l+1, mu) tail integrates to (l+1)/mu,
  // and sum_l p_l*l and sum_l p_l have closed forms.
  const double sum_l_pl = n / (2.0 * (n - 2.0));
  const double sum_pl = n / (2.0 * (n - 1.0));
  return (s.p0 + (sum_l_pl + sum_pl) / n) / mu;
}

HoLStateDist hol_state_dist(int n, int k, double p) {
  if (k < 2 || k > n) throw std::invalid_argument("hol_state_dist: need 2 <= k <= n");
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("hol_state_dist: p must be in [0,1]");
  HoLStateDist d;
  d.n = n;
  d.k = k;
  d.p = p;
  d.mass.assign(k, 0.0);
  if (p >= 1.0) {
    // limit: every other queue busy, conditioning pins R at k-1
    d.mass[k - 1] = 1.0;
    return d;
  }
  double term = std::pow(1.0 - p, n - 1);  // Binom(n-1, p) pmf at 0
  double total = 0.0;
  for (int r = 0; r < k; ++r) {
    d.mass[r] = term;
    total += term;
    term *= (static_cast<double>(n - 1 - r) / (r + 1)) * (p / (1.0 - p));
  }
  for (double& m : d.mass) m /= total;
  return d;
}

double v_cdf(int n, int k, double p, double rate, double v) {
  const HoLStateDist d = hol_state_dist(n, k, p);
  double acc = 0.0;
  for (int r = 0; r < k; ++r) {
    if (d.mass[r] == 0.0) continue;
    acc += d.mass[r] * ExpOrderStat(n - 1 - r, k - 1 - r, rate).cdf(v);
  }
  return acc;
}

void v_moments(int n, int k, double p, double rate, double* mean, double* second) {
  const HoLStateDist d = hol_state_dist(n, k, p);
  double m1 = 0.0, m2 = 0.0;
  for (int r = 0; r < k; ++r) {
    if (d.mass[r] == 0.0) continue;
    const ExpOrderStat os(n - 1 - r, k - 1 - r, rate);
    m1 += d.mass[r] * os.mean();
    m2 += d.mass[r] * os.second_moment();
  }
  if (mean) *mean = m1;
  if (second) *second = m2;
}

double ve_cdf(int n, int k, double p, double rate, double v) {
  const HoLStateDist d = hol_state_dist(n, k, p);
  double acc = 0.0;
  for (int r = 0; r < k; ++r) {
    if (d.mass[r] == 0.0) continue;
    double inner = 0.0;
    for (int j = 1; j <= k - r; ++j)
      inner += ExpOrderStat(n - r - j, k - r - j, rate).cdf(v);
    acc += d.mass[r] * inner / (k - r);
  }
  return acc;
}

void ve_moments(int n, int k, double p, double rate, double* mean, double* second) {
  const HoLStateDist d = hol_state_dist(n, k, p);
  double m1 = 0.0, m2 = 0.0;
  for (int r = 0; r < k; ++r) {
    if (d.mass[r] == 0.0) continue;
    double i1 = 0.0, i2 = 0.0;
    for (int j = 1; j <= k - r; ++j) {
      const ExpOrderStat os(n - r - j, k - r - j, rate);
      i1 += os.mean();
      i2 += os.second_moment();
    }
    m1 += d.mass[r] * i1 / (k - r);
    m2 += d.mass[r] * i2 / (k - r);
  }
  if (mean) *mean = m1;
  if (second) *second = m2;
}

double efs_mean_wait(double rate, double mean_v, double second_v,
                     double mean_ve, double second_ve) {
  const double rho_reg = rate * mean_v;
  if (rho_reg >= 1.0) throw std::domain_error("efs_mean_wait: regular load at or above 1");
  const double rho_exc = rate * mean_ve;
  // probability an arrival finds the system empty
  const double pi0 = (1.0 - rho_reg) / (1.0 - rho_reg + rho_exc);
  return rate * (pi0 * second_ve + (1.0 - pi0) * second_v) / (2.0 * (1.0 - rho_reg));
}

EfsApproxResult efs_fixed_point(const BatchMixParams& params) {
  params.validate();
  if (params.k >= params.n)
    throw std::invalid_argument("efs_fixed_point: k = n is an unstable assembly queue");

  const auto g = [&](double rho) {
    double mv, mve;
    v_moments(params.n, params.k, rho, params.rate, &mv, nullptr);
    ve_moments(params.n, params.k, rho, params.rate, &mve, nullptr);
    const double denom = 1.0 - params.rate * (mv - mve);
    if (denom <= 0.0) return std::numeric_limits<double>::infinity();
    return params.rate * mve / denom;
  };

  EfsApproxResult result;
  double lo = 0.0, hi = 1.0 - 1e-6;
  double h_lo = g(lo) - lo;
  double h_hi = g(hi) - hi;
  if (h_lo > 0.0 && h_hi > 0.0) {
    result.status = EfsStatus::unstable;
    return result;
  }
  double rho = hi;
  bool converged = false;
  for (int it = 0; it < 200; ++it) {
    rho = 0.5 * (lo + hi);
    const double h = g(rho) - rho;
    if (std::fabs(h) < 1e-9) {
      converged = true;
      break;
    }
    if ((h > 0.0) == (h_lo > 0.0))
      lo = rho;
    else
      hi = rho;
  }
  if (!converged) {
    result.status = EfsStatus::no_convergence;
    return result;
  }

  result.rho = rho;
  v_moments(params.n, params.k, rho, params.rate, &result.mean_v, &result.second_v);
  ve_moments(params.n, params.k, rho, params.rate, &result.mean_ve, &result.second_ve);
  if (params.rate * result.mean_v >= 1.0) {
    result.status = EfsStatus::unstable;
    return result;
  }
  result.mean_wait = efs_mean_wait(params.rate, result.mean_v, result.second_v,
                                   result.mean_ve, result.second_ve);
  // sojourn = wait + own batch-formation time; arrivals to an empty queue
  // (probability 1 - rho by PASTA) get the exceptional distribution
  result.mean_delay =
      result.mean_wait + (1.0 - rho) * result.mean_ve + rho * result.mean_v;
  return result;
}

double sampling_load(const SamplingMixParams& params) {
  params.validate();
  return (1.0 - params.p_a) / (params.k - params.p_a);
}

double sampling_mean_delay(const SamplingMixParams& params) {
  params.validate();
  if (params.k == 1)
    throw std::invalid_argument("sampling_mean_delay: undefined for k = 1");
  return (1.0 - params.p_a) / (params.rate * (params.k - 1.0));
}

}  // namespace mixq
