#pragma once

// Independent oracles used by the test suites. These deliberately avoid the
// closed forms they are checking: the chain solver works from transition
// rates, the quadrature works from CDFs, and the single-server simulator
// works from raw event dynamics.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "mixq/rng.hpp"

namespace testsupport {

// Stationary distribution of a birth-death chain truncated at `states`-1,
// given per-state birth and death rates. Solved by the detailed-balance
// recursion on raw rates.
inline std::vector<double> birth_death_stationary(
    int states, const std::function<double(int)>& birth,
    const std::function<double(int)>& death) {
  std::vector<double> pi(states, 0.0);
  pi[0] = 1.0;
  for (int i = 1; i < states; ++i) pi[i] = pi[i - 1] * birth(i - 1) / death(i);
  const double total = std::accumulate(pi.begin(), pi.end(), 0.0);
  for (double& p : pi) p /= total;
  return pi;
}

// Adaptive Simpson quadrature.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      double fa, double fm, double fb, double whole, double tol,
                      int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

// Integral of the survival function 1-F over [0, inf), chasing the tail by
// doubling until it is negligible.
inline double integrate_survival(const std::function<double(double)>& cdf,
                                 double tol = 1e-10) {
  const auto surv = [&](double v) { return 1.0 - cdf(v); };
  double total = 0.0;
  double a = 0.0, width = 1.0;
  for (int i = 0; i < 64; ++i) {
    total += integrate(surv, a, a + width, tol);
    a += width;
    width *= 2.0;
    if (surv(a) < 1e-14) break;
  }
  return total;
}

struct SampleStats {
  double mean = 0.0;
  double second = 0.0;
};

inline SampleStats monte_carlo(const std::function<double(mixq::RngStream&)>& draw,
                               std::size_t samples, std::uint64_t seed) {
  mixq::RngStream rng(seed, 0xa11ce);
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = draw(rng);
    s1 += x;
    s2 += x * x;
  }
  return {s1 / samples, s2 / samples};
}

// Mean waiting time in a FIFO single-server queue with Poisson arrivals
// where the first customer of each busy period draws its service time from
// `exceptional` and all others from `regular`.
inline double mg1_efs_mean_wait(double arrival_rate,
                                const std::function<double(mixq::RngStream&)>& regular,
                                const std::function<double(mixq::RngStream&)>& exceptional,
                                std::size_t customers, std::uint64_t seed,
                                std::size_t warmup = 10000) {
  mixq::RngStream arr(seed, 1);
  mixq::RngStream svc(seed, 2);
  double t = 0.0;
  double server_free = 0.0;
  double wait_sum = 0.0;
  std::size_t counted = 0;
  for (std::size_t i = 0; i < customers + warmup; ++i) {
    t += arr.exponential(arrival_rate);
    const bool empty = t >= server_free;
    const double start = empty ? t : server_free;
    const double service = empty ? exceptional(svc) : regular(svc);
    if (i >= warmup) {
      wait_sum += start - t;
      ++counted;
    }
    server_free = start + service;
  }
  return wait_sum / counted;
}

inline double rel_err(double actual, double expected) {
  return std::fabs(actual - expected) / std::fabs(expected);
}

}  // namespace testsupport
