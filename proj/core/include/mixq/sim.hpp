#pragma once

#include <cstdint>
#include <vector>

#include "mixq/mixes.hpp"
#include "mixq/rng.hpp"
#include "mixq/trace.hpp"

namespace mixq {

enum class MixKind { batch, sampling };

/// Run length: whichever bound is set first stops the run. At least one of
/// the two must be positive.
struct Horizon {
  std::uint64_t max_messages = 0;
  Time max_time = 0.0;
};

struct SimParams {
  MixKind kind = MixKind::batch;
  int n = 2;
  int k = 2;
  double rate = 1.0;
  double p_a = 0.0;  // sampling mix only
  int m = 1;
  Horizon horizon;
  std::uint64_t seed = 1;
  double warmup_fraction = 0.1;
  bool collect_trace = true;
};

struct SimResult {
  std::vector<ObservationRecord> trace;
  std::vector<DelaySample> delays;  // post-warm-up only
  QueueStats stats;
  /// Trace indices of arrivals that found every queue empty (the state
  /// oracle granted to the stateful attack).
  std::vector<std::uint32_t> empty_arrival_indices;
  Population population;
  std::uint64_t arrivals = 0;
  std::uint64_t departures = 0;
  std::uint64_t still_enqueued = 0;  // excluded from delay samples
  Time end_time = 0.0;
};

/// Streaming consumer; return false to stop the run early.
class TraceSink {
 public:
  virtual ~TraceSink() = default;
  virtual bool on_record(const ObservationRecord& record) = 0;
};

/// Deterministic run: identical (params, seed) gives a bit-identical trace.
/// Each sender's Poisson stream is an independent substream of the master
/// seed. If `sink` is given, records are pushed to it as they occur.
SimResult run(const SimParams& params, TraceSink* sink = nullptr);

/// Inter-arrival time stream of one Poisson source.
class ExpStream {
 public:
  ExpStream(double rate, std::uint64_t substream, std::uint64_t seed)
      : rate_(rate), rng_(seed, substream) {}

  double next() { return rng_.exponential(rate_); }
  double rate() const { return rate_; }

 private:
  double rate_;
  RngStream rng_;
};

}  // namespace mixq
