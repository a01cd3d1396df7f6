#pragma once

#include <cstdint>
#include <vector>

namespace mixq {

using Time = double;

struct Message {
  int sender = -1;
  int receiver = -1;
  Time arrival = 0.0;
  std::uint64_t seq = 0;  // global arrival sequence number
};

enum class RecordKind { arrival, departure };

/// One adversary-visible event. A departure triggered by an arrival carries
/// the identical timestamp and is sequenced immediately after it; a batch is
/// a single record (set-level knowledge only, no intra-batch ordering).
struct ObservationRecord {
  Time time = 0.0;
  RecordKind kind = RecordKind::arrival;
  int sender = -1;             // valid for arrivals
  std::vector<int> receivers;  // valid for departures, in queue-index order
};

struct DelaySample {
  int sender = -1;
  double delay = 0.0;  // departure time - arrival time; zero is legitimate
};

/// Time-averaged queue statistics over the post-warm-up window.
struct QueueStats {
  std::vector<double> mean_len;
  std::vector<double> mean_len_sq;
  std::vector<double> load;  // busy fraction per queue
  std::size_t max_len = 0;
  double window = 0.0;

  double avg_mean_len() const;
  double avg_load() const;
  double avg_mean_len_sq() const;
  double total_mean_len() const;
};

}  // namespace mixq
