#include "mixq/sim.hpp"

#include <algorithm>
#include <memory>
#include <numeric>
#include <stdexcept>

namespace mixq {

double QueueStats::avg_mean_len() const {
  if (mean_len.empty()) return 0.0;
  return std::accumulate(mean_len.begin(), mean_len.end(), 0.0) / mean_len.size();
}

double QueueStats::avg_mean_len_sq() const {
  if (mean_len_sq.empty()) return 0.0;
  return std::accumulate(mean_len_sq.begin(), mean_len_sq.end(), 0.0) / mean_len_sq.size();
}

double QueueStats::avg_load() const {
  if (load.empty()) return 0.0;
  return std::accumulate(load.begin(), load.end(), 0.0) / load.size();
}

double QueueStats::total_mean_len() const {
  return std::accumulate(mean_len.begin(), mean_len.end(), 0.0);
}

namespace {

// Lazily integrated per-queue statistics.
struct StatsAccum {
  explicit StatsAccum(int n)
      : len(n, 0), last(n, 0.0), acc_len(n, 0.0), acc_len2(n, 0.0), acc_busy(n, 0.0) {}

  std::vector<std::size_t> len;
  std::vector<double> last;
  std::vector<double> acc_len;
  std::vector<double> acc_len2;
  std::vector<double> acc_busy;
  std::size_t max_len = 0;

  void bump(int q, int delta, Time t) {
    const double dt = t - last[q];
    const double l = static_cast<double>(len[q]);
    acc_len[q] += l * dt;
    acc_len2[q] += l * l * dt;
    if (len[q] > 0) acc_busy[q] += dt;
    last[q] = t;
    len[q] += delta;
    max_len = std::max(max_len, len[q]);
  }

  void reset(Time t) {
    std::fill(last.begin(), last.end(), t);
    std::fill(acc_len.begin(), acc_len.end(), 0.0);
    std::fill(acc_len2.begin(), acc_len2.end(), 0.0);
    std::fill(acc_busy.begin(), acc_busy.end(), 0.0);
    max_len = *std::max_element(len.begin(), len.end());
  }

  QueueStats finish(Time end, Time window_start) const {
    QueueStats s;
    const int n = static_cast<int>(len.size());
    const double window = end - window_start;
    s.window = window;
    s.max_len = max_len;
    s.mean_len.resize(n);
    s.mean_len_sq.resize(n);
    s.load.resize(n);
    for (int q = 0; q < n; ++q) {
      const double dt = end - last[q];
      const double l = static_cast<double>(len[q]);
      const double a1 = acc_len[q] + l * dt;
      const double a2 = acc_len2[q] + l * l * dt;
      const double ab = acc_busy[q] + (len[q] > 0 ? dt : 0.0);
      s.mean_len[q] = window > 0.0 ? a1 / window : 0.0;
      s.mean_len_sq[q] = window > 0.0 ? a2 / window : 0.0;
      s.load[q] = window > 0.0 ? ab / window : 0.0;
    }
    return s;
  }
};

}  // namespace

SimResult run(const SimParams& params, TraceSink* sink) {
  if (params.n < 2) throw std::invalid_argument("run: n must be at least 2");
  if (!(params.rate > 0.0)) throw std::invalid_argument("run: rate must be positive");
  if (params.m < 1) throw std::invalid_argument("run: m must be at least 1");
  if (params.warmup_fraction < 0.0 || params.warmup_fraction >= 1.0)
    throw std::invalid_argument("run: warmup_fraction must be in [0,1)");
  if (params.horizon.max_messages == 0 && !(params.horizon.max_time > 0.0))
    throw std::invalid_argument("run: horizon must bound messages or time");

  std::unique_ptr<Mix> mix;
  if (params.kind == MixKind::batch)
    mix = std::make_unique<BatchMix>(params.n, params.k);
  else
    mix = std::make_unique<SamplingMix>(params.n, params.k, params.p_a);

  SimResult result;
  result.population = Population{params.n, params.m};

  const int n = params.n;
  std::vector<RngStream> arrival_rng;
  arrival_rng.reserve(n);
  for (int s = 0; s < n; ++s) arrival_rng.emplace_back(params.seed, s);
  RngStream receiver_rng(params.seed, static_cast<std::uint64_t>(n));
  RngStream select_rng(params.seed, static_cast<std::uint64_t>(n) + 1);

  std::vector<Time> next_arrival(n);
  for (int s = 0; s < n; ++s) next_arrival[s] = arrival_rng[s].exponential(params.rate);

  StatsAccum stats(n);

  const bool by_count = params.horizon.max_messages > 0;
  const std::uint64_t warmup_count =
      by_count ? static_cast<std::uint64_t>(params.warmup_fraction *
                                            static_cast<double>(params.horizon.max_messages))
               : 0;
  const Time warmup_time = by_count ? 0.0 : params.warmup_fraction * params.horizon.max_time;

  bool warmed = by_count ? warmup_count == 0 : !(warmup_time > 0.0);
  Time warmup_start = 0.0;
  std::uint64_t cutoff_seq = 0;

  std::uint64_t record_index = 0;
  Time now = 0.0;
  bool stopped_by_sink = false;

  const auto emit = [&](ObservationRecord&& rec) {
    if (sink && !stopped_by_sink && !sink->on_record(rec)) stopped_by_sink = true;
    if (params.collect_trace) result.trace.push_back(std::move(rec));
    ++record_index;
  };

  while (!stopped_by_sink) {
    if (by_count && result.arrivals >= params.horizon.max_messages) break;

    int s = 0;
    for (int i = 1; i < n; ++i)
      if (next_arrival[i] < next_arrival[s]) s = i;
    const Time t = next_arrival[s];

    if (params.horizon.max_time > 0.0 && t > params.horizon.max_time) {
      now = params.horizon.max_time;
      break;
    }

    if (!warmed && !by_count && t >= warmup_time) {
      stats.reset(warmup_time);
      warmup_start = warmup_time;
      cutoff_seq = result.arrivals;
      warmed = true;
    }
    if (!warmed && by_count && result.arrivals >= warmup_count) {
      stats.reset(t);
      warmup_start = t;
      cutoff_seq = result.arrivals;
      warmed = true;
    }

    Message msg;
    msg.sender = s;
    msg.receiver = result.population.assign(s, receiver_rng);
    msg.arrival = t;
    msg.seq = result.arrivals;
    ++result.arrivals;
    now = t;
    next_arrival[s] = t + arrival_rng[s].exponential(params.rate);

    bool all_empty = true;
    for (int q = 0; q < n && all_empty; ++q) all_empty = stats.len[q] == 0;
    if (all_empty) result.empty_arrival_indices.push_back(static_cast<std::uint32_t>(record_index));

    ObservationRecord arrival;
    arrival.time = t;
    arrival.kind = RecordKind::arrival;
    arrival.sender = s;
    emit(std::move(arrival));

    stats.bump(s, +1, t);

    std::vector<Message> batch = mix->on_arrival(msg, select_rng);
    if (!batch.empty()) {
      ObservationRecord departure;
      departure.time = t;
      departure.kind = RecordKind::departure;
      departure.receivers.reserve(batch.size());
      for (const Message& out : batch) {
        stats.bump(out.sender, -1, t);
        departure.receivers.push_back(out.receiver);
        if (warmed && out.seq >= cutoff_seq)
          result.delays.push_back({out.sender, t - out.arrival});
      }
      result.departures += batch.size();
      emit(std::move(departure));
    }
  }

  result.end_time = now;
  result.stats = stats.finish(now, warmup_start);
  result.still_enqueued = 0;
  for (int q = 0; q < n; ++q) result.still_enqueued += stats.len[q];
  return result;
}

}  // namespace mixq
