#pragma once

#include <vector>

namespace mixq {

struct BatchMixParams {
  int n;          // connected senders
  int k;          // batch size, 2 <= k <= n
  double rate;    // per-sender Poisson rate

  void validate() const;
};

struct SamplingMixParams {
  int n;
  int k;
  double rate;
  double p_a;     // probability the arriving queue joins the release set

  void validate() const;
};

/// Stationary law of the longest-queue birth-death process of an (n,2) mix:
/// p0 plus a geometric tail p_l = coeff * tail_base^(l+1).
struct N2Stationary {
  int n;
  double p0;
  double tail_base;   // 1/(n-1)
  double coeff;       // n(n-2)/2

  double p(int l) const;  // stationary probability of longest queue length l
};

struct HoLStateDist {
  int n;
  int k;
  double p;
  std::vector<double> mass;  // over r in {0, ..., k-1}
};

enum class EfsStatus { ok, no_convergence, unstable };

/// Output of the decoupled M/G/1 queue with exceptional first service:
/// fixed-point load, the two service-time moment pairs evaluated at that
/// load, and the resulting mean sojourn time of a message.
struct EfsApproxResult {
  EfsStatus status = EfsStatus::ok;
  double rho = 0.0;
  double mean_v = 0.0;
  double second_v = 0.0;
  double mean_ve = 0.0;
  double second_ve = 0.0;
  double mean_wait = 0.0;
  double mean_delay = 0.0;
};

// ---- exact (n,2) batch mix ----

N2Stationary n2_stationary(const BatchMixParams& params);

struct N2Moments {
  double mean_len;    // mean length of an arbitrary queue
  double second_len;
  double load;        // fraction of time an arbitrary queue is non-empty
};

N2Moments n2_moments(const BatchMixParams& params);

/// P(D > w) for the waiting time of an arbitrary message; the geometric
/// state tail is truncated once its remaining mass drops below 1e-12.
double n2_delay_ccdf(const BatchMixParams& params, double w);

/// Mean waiting time, i.e. the integral of the CCDF above.
double n2_mean_delay(const BatchMixParams& params);

// ---- (n, k>2) decoupling approximation ----

/// Number of non-empty other queues seen at head of line:
/// Binomial(n-1, p) conditioned on being at most k-1.
HoLStateDist hol_state_dist(int n, int k, double p);

/// Batch-formation delay of a message that arrived to a non-empty queue.
double v_cdf(int n, int k, double p, double rate, double v);
void v_moments(int n, int k, double p, double rate, double* mean, double* second);

/// Batch-formation delay of a message that arrived to an empty queue
/// (the arriving message is itself one of the arrivals the batch waits for).
double ve_cdf(int n, int k, double p, double rate, double v);
void ve_moments(int n, int k, double p, double rate, double* mean, double* second);

/// Solves rho = rate*E[Ve](rho) / (1 - rate*(E[V](rho) - E[Ve](rho))) by
/// bisection on [0, 1) and derives the mean message delay from the moments
/// at the fixed point.
EfsApproxResult efs_fixed_point(const BatchMixParams& params);

/// Mean waiting time of an M/G/1 queue whose first customer of each busy
/// period has service moments (mean_ve, second_ve) and all others
/// (mean_v, second_v), at Poisson arrival rate `rate`.
double efs_mean_wait(double rate, double mean_v, double second_v,
                     double mean_ve, double second_ve);

// ---- sampling mix closed forms ----

double sampling_load(const SamplingMixParams& params);
double sampling_mean_delay(const SamplingMixParams& params);

}  // namespace mixq
