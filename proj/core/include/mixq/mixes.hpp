#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "mixq/rng.hpp"
#include "mixq/trace.hpp"

namespace mixq {

/// Ground-truth sender/receiver mapping. Receiver sets are pairwise
/// disjoint and all of size m: sender s owns ids [s*m, (s+1)*m).
struct Population {
  int n = 0;
  int m = 1;

  int assign(int sender, RngStream& rng) const;
  int owner(int receiver) const { return receiver / m; }
  std::vector<int> receivers_of(int sender) const;
  int universe_size() const { return n * m; }
};

class Mix {
 public:
  virtual ~Mix() = default;

  /// Enqueues the message and returns the batch dispatched by this arrival
  /// (possibly empty), in queue-index order.
  virtual std::vector<Message> on_arrival(const Message& msg, RngStream& rng) = 0;

  virtual int n_queues() const = 0;
};

/// Deterministic (n,k) batch mix: dispatch one head-of-line message from
/// each of k queues the moment k queues are non-empty. Between events the
/// number of non-empty queues never exceeds k-1.
class BatchMix : public Mix {
 public:
  BatchMix(int n, int k);

  std::vector<Message> on_arrival(const Message& msg, RngStream& rng) override;
  int n_queues() const override { return static_cast<int>(queues_.size()); }

  int non_empty_count() const { return non_empty_; }
  std::size_t queue_len(int q) const { return queues_[q].size(); }

 private:
  int k_;
  int non_empty_ = 0;
  std::vector<std::deque<Message>> queues_;
};

/// Randomized (n,k) sampling mix: each arrival releases k randomly selected
/// queues. With probability p_a the arriving queue is in the release set
/// together with k-1 of the other n-1 queues; otherwise all k are drawn
/// from the other n-1. Released empty queues forward nothing.
class SamplingMix : public Mix {
 public:
  SamplingMix(int n, int k, double p_a);

  std::vector<Message> on_arrival(const Message& msg, RngStream& rng) override;
  int n_queues() const override { return static_cast<int>(queues_.size()); }

  std::size_t queue_len(int q) const { return queues_[q].size(); }

 private:
  int k_;
  double p_a_;
  std::vector<std::deque<Message>> queues_;
  std::vector<int> scratch_;  // other-queue indices for partial shuffles
};

/// Empirical stability probe: queue growth across increasing horizons.
struct StabilityReport {
  enum class Classification { stable_like, unstable_like, inconclusive };

  std::vector<std::uint64_t> horizons;      // message counts
  std::vector<double> avg_total_len;        // time-averaged total queue length
  std::vector<std::size_t> max_len;         // max queue length observed
  Classification classification = Classification::inconclusive;
};

struct StabilityProbeParams {
  bool sampling = false;
  int n = 2;
  int k = 2;
  double rate = 1.0;
  double p_a = 0.0;
  std::uint64_t seed = 1;
};

StabilityReport stability_probe(const StabilityProbeParams& params,
                                const std::vector<std::uint64_t>& horizons);

}  // namespace mixq
