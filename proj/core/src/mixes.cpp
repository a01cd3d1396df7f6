#include "mixq/mixes.hpp"

#include <algorithm>
#include <stdexcept>

#include "mixq/sim.hpp"

namespace mixq {

int Population::assign(int sender, RngStream& rng) const {
  if (sender < 0 || sender >= n) throw std::invalid_argument("Population::assign: bad sender");
  if (m == 1) return sender * m;
  return sender * m + rng.uniform_int(m);
}

std::vector<int> Population::receivers_of(int sender) const {
  std::vector<int> r(m);
  for (int i = 0; i < m; ++i) r[i] = sender * m + i;
  return r;
}

BatchMix::BatchMix(int n, int k) : k_(k), queues_(n) {
  if (n < 2 || k < 2 || k > n) throw std::invalid_argument("BatchMix: need 2 <= k <= n");
}

std::vector<Message> BatchMix::on_arrival(const Message& msg, RngStream&) {
  auto& q = queues_[msg.sender];
  if (q.empty()) ++non_empty_;
  q.push_back(msg);

  std::vector<Message> batch;
  if (non_empty_ == k_) {
    batch.reserve(k_);
    for (auto& queue : queues_) {
      if (queue.empty()) continue;
      batch.push_back(queue.front());
      queue.pop_front();
      if (queue.empty()) --non_empty_;
    }
  }
  return batch;
}

SamplingMix::SamplingMix(int n, int k, double p_a)
    : k_(k), p_a_(p_a), queues_(n) {
  if (n < 2 || k < 1 || k > n - 1)
    throw std::invalid_argument("SamplingMix: need 1 <= k <= n-1");
  if (p_a < 0.0 || p_a > 1.0) throw std::invalid_argument("SamplingMix: p_a must be in [0,1]");
  scratch_.reserve(n - 1);
}

std::vector<Message> SamplingMix::on_arrival(const Message& msg, RngStream& rng) {
  queues_[msg.sender].push_back(msg);

  const bool include_own = rng.uniform() < p_a_;
  const int draws = include_own ? k_ - 1 : k_;

  scratch_.clear();
  for (int q = 0; q < n_queues(); ++q)
    if (q != msg.sender) scratch_.push_back(q);

  // partial Fisher-Yates over the other n-1 queues
  for (int i = 0; i < draws; ++i) {
    const int j = i + rng.uniform_int(static_cast<int>(scratch_.size()) - i);
    std::swap(scratch_[i], scratch_[j]);
  }
  scratch_.resize(draws);
  if (include_own) scratch_.push_back(msg.sender);
  std::sort(scratch_.begin(), scratch_.end());

  std::vector<Message> batch;
  for (int q : scratch_) {
    auto& queue = queues_[q];
    if (queue.empty()) continue;
    batch.push_back(queue.front());
    queue.pop_front();
  }
  return batch;
}

StabilityReport stability_probe(const StabilityProbeParams& params,
                                const std::vector<std::uint64_t>& horizons) {
  if (horizons.size() < 2 || !std::is_sorted(horizons.begin(), horizons.end()))
    throw std::invalid_argument("stability_probe: need at least two increasing horizons");

  StabilityReport report;
  report.horizons = horizons;
  for (std::uint64_t h : horizons) {
    SimParams sp;
    sp.kind = params.sampling ? MixKind::sampling : MixKind::batch;
    sp.n = params.n;
    sp.k = params.k;
    sp.rate = params.rate;
    sp.p_a = params.p_a;
    sp.m = 1;
    sp.horizon.max_messages = h;
    sp.seed = params.seed;
    sp.warmup_fraction = 0.0;  // growth is the signal; do not discard it
    sp.collect_trace = false;
    const SimResult r = run(sp);
    report.avg_total_len.push_back(r.stats.total_mean_len());
    report.max_len.push_back(r.stats.max_len);
  }

  const std::size_t last = horizons.size() - 1;
  const double a = report.avg_total_len[last - 1];
  const double b = report.avg_total_len[last];
  const bool converged = std::abs(b - a) <= 0.05 * std::max(std::abs(a), 1e-12);
  bool growing = true;
  for (std::size_t i = 1; i < report.max_len.size(); ++i)
    growing = growing && report.max_len[i] > report.max_len[i - 1];

  if (converged)
    report.classification = StabilityReport::Classification::stable_like;
  else if (growing)
    report.classification = StabilityReport::Classification::unstable_like;
  return report;
}

}  // namespace mixq
