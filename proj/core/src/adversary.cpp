#include "mixq/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mixq/mixes.hpp"

namespace mixq {

namespace {

bool disjoint(const std::set<int>& a, const std::set<int>& b) {
  for (int x : a)
    if (b.count(x)) return false;
  return true;
}

}  // namespace

AttackResult intersection_attack(const std::vector<ObservationRecord>& trace,
                                 int target, int m, int n, int k,
                                 const IntersectionAttackOptions& options) {
  if (m < 1 || n < 2 || k < 2 || k > n)
    throw std::invalid_argument("intersection_attack: bad parameters");

  AttackResult result;
  if (static_cast<long long>(k) * m > n) {
    // m disjoint size-k recipient sets can never be observed
    result.status = AttackStatus::impossible;
    result.diagnostic = "k*m > n: disjoint candidate sets cannot exist";
    return result;
  }

  BatchMix replay(n, k);
  RngStream unused(0, 0);

  CandidateSets candidates;
  bool pending_batch = false;
  bool pending_tagged = false;
  std::size_t pending_size = 0;
  Time pending_time = 0.0;

  const auto all_singletons = [&]() {
    if (candidates.size() != static_cast<std::size_t>(m)) return false;
    return std::all_of(candidates.begin(), candidates.end(),
                       [](const std::set<int>& s) { return s.size() == 1; });
  };

  for (const ObservationRecord& rec : trace) {
    ++result.observations_used;

    if (rec.kind == RecordKind::arrival) {
      if (pending_batch)
        throw std::invalid_argument("intersection_attack: malformed trace (missing departure)");
      Message msg;
      msg.sender = rec.sender;
      msg.arrival = rec.time;
      const std::vector<Message> batch = replay.on_arrival(msg, unused);
      if (!batch.empty()) {
        pending_batch = true;
        pending_size = batch.size();
        pending_time = rec.time;
        pending_tagged = std::any_of(batch.begin(), batch.end(),
                                     [&](const Message& b) { return b.sender == target; });
      }
      continue;
    }

    // departure record: must match the replayed dynamics exactly
    if (!pending_batch || rec.receivers.size() != pending_size || rec.time != pending_time)
      throw std::invalid_argument("intersection_attack: malformed trace (causality violation)");
    pending_batch = false;
    if (!pending_tagged) continue;

    std::set<int> tagged(rec.receivers.begin(), rec.receivers.end());

    if (candidates.size() < static_cast<std::size_t>(m)) {
      // phase 1: collect pairwise-disjoint tagged sets
      const bool ok = std::all_of(candidates.begin(), candidates.end(),
                                  [&](const std::set<int>& c) { return disjoint(c, tagged); });
      if (ok) {
        candidates.push_back(std::move(tagged));
        if (options.on_update) options.on_update(candidates);
      }
      continue;
    }

    // phase 2: refine when the tagged set intersects exactly one candidate
    int hit = -1;
    int hits = 0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (!disjoint(candidates[i], tagged)) {
        ++hits;
        hit = static_cast<int>(i);
      }
    }
    if (hits != 1) continue;  // ambiguous sets may remove the true receiver

    std::set<int> refined;
    for (int r : candidates[hit])
      if (tagged.count(r)) refined.insert(r);
    if (refined.size() < candidates[hit].size()) {
      candidates[hit] = std::move(refined);
      if (options.on_update) options.on_update(candidates);
    }

    if (all_singletons()) {
      result.status = AttackStatus::success;
      result.ttd = rec.time;
      for (const std::set<int>& c : candidates) result.identified.push_back(*c.begin());
      std::sort(result.identified.begin(), result.identified.end());
      return result;
    }
  }

  result.status = AttackStatus::exhausted;
  result.diagnostic = "trace exhausted before all candidate sets became singletons";
  return result;
}

AttackResult stateful_sampling_attack(const std::vector<ObservationRecord>& trace,
                                      const EmptyStateOracle* oracle,
                                      int target, int m, int n,
                                      const StatefulAttackOptions& options) {
  if (!oracle)
    throw std::invalid_argument("stateful_sampling_attack: requires the empty-state oracle");
  if (m < 1 || n < 2)
    throw std::invalid_argument("stateful_sampling_attack: bad parameters");

  std::vector<bool> empty_at(trace.size(), false);
  for (std::uint32_t idx : oracle->empty_arrival_indices)
    if (idx < trace.size()) empty_at[idx] = true;

  // candidate pool over the full receiver-id universe
  std::vector<bool> in_pool(static_cast<std::size_t>(n) * m, true);
  std::size_t pool_count = in_pool.size();
  std::set<int> confirmed;

  std::uint64_t pending_target_ub = 0;  // target messages possibly enqueued
  std::uint64_t empty_trials = 0;
  bool rule_a_fired = false;

  AttackResult result;

  bool prev_target_at_empty = false;
  Time prev_arrival_time = 0.0;

  const auto finish = [&](Time t) {
    result.status = AttackStatus::success;
    result.ttd = t;
    if (confirmed.size() == static_cast<std::size_t>(m)) {
      result.identified.assign(confirmed.begin(), confirmed.end());
    } else {
      for (std::size_t r = 0; r < in_pool.size(); ++r)
        if (in_pool[r]) result.identified.push_back(static_cast<int>(r));
    }
  };

  for (std::size_t i = 0; i < trace.size(); ++i) {
    const ObservationRecord& rec = trace[i];
    ++result.observations_used;

    if (rec.kind == RecordKind::arrival) {
      if (empty_at[i]) pending_target_ub = 0;
      prev_target_at_empty = false;
      if (rec.sender == target) {
        if (empty_at[i] && !rule_a_fired) ++empty_trials;
        prev_target_at_empty = empty_at[i];
        ++pending_target_ub;
        prev_arrival_time = rec.time;
      }
      continue;
    }

    // departure
    if (prev_target_at_empty && rec.time == prev_arrival_time && rec.receivers.size() == 1) {
      // Rule A: the only message in the mix was the target's
      const int partner = rec.receivers.front();
      if (!rule_a_fired) {
        rule_a_fired = true;
        result.rule_a_trials = empty_trials;
      }
      confirmed.insert(partner);
      if (pending_target_ub > 0) --pending_target_ub;
      if (confirmed.size() == static_cast<std::size_t>(m)) {
        finish(rec.time);
        return result;
      }
    } else if (options.use_rule_b && pending_target_ub == 0) {
      // Rule B: no target message can be in this batch
      for (int r : rec.receivers) {
        if (r >= 0 && r < static_cast<int>(in_pool.size()) && in_pool[r] && !confirmed.count(r)) {
          in_pool[r] = false;
          --pool_count;
        }
      }
      if (pool_count == static_cast<std::size_t>(m)) {
        finish(rec.time);
        return result;
      }
    }
    prev_target_at_empty = false;
  }

  result.status = AttackStatus::exhausted;
  result.diagnostic = "trace exhausted before identification";
  return result;
}

AttackResult stateless_frequency_attack(const std::vector<ObservationRecord>& trace,
                                        int target, int m, int n, double p_a,
                                        const FrequencyAttackOptions& options) {
  if (m < 1 || n < 2 || p_a < 0.0 || p_a > 1.0)
    throw std::invalid_argument("stateless_frequency_attack: bad parameters");

  const double q = (1.0 - p_a) / (n - 1.0);
  FrequencyDecisionRule rule = options.rule;
  if (rule == FrequencyDecisionRule::automatic) {
    if (std::fabs(p_a - q) < 1e-12) {
      AttackResult r;
      r.status = AttackStatus::exhausted;
      r.diagnostic = "p_a = 1/n equalizes departure frequencies; counters are uninformative";
      return r;
    }
    rule = p_a > q ? FrequencyDecisionRule::most_frequent
                   : FrequencyDecisionRule::least_frequent;
  }
  const bool top = rule == FrequencyDecisionRule::most_frequent;

  // counters keyed by receiver id; ids outside [0, n*m) extend the table
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(n) * m, 0);
  std::uint64_t target_arrivals = 0;
  Time last_time = 0.0;
  bool prev_was_target = false;
  Time prev_time = 0.0;

  AttackResult result;

  const auto ranked = [&](std::vector<int>& order) {
    order.resize(counts.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (counts[a] != counts[b]) return top ? counts[a] > counts[b] : counts[a] < counts[b];
      return a < b;
    });
  };

  const auto decide = [&]() {
    std::vector<int> order;
    ranked(order);
    result.status = AttackStatus::success;
    result.identified.assign(order.begin(), order.begin() + m);
    std::sort(result.identified.begin(), result.identified.end());
    result.ttd = last_time;
    result.observations_used = target_arrivals;
  };

  for (const ObservationRecord& rec : trace) {
    if (rec.kind == RecordKind::arrival) {
      prev_was_target = rec.sender == target;
      prev_time = rec.time;
      if (prev_was_target) {
        ++target_arrivals;
        last_time = rec.time;
      }
      continue;
    }
    if (!prev_was_target || rec.time != prev_time) {
      prev_was_target = false;
      continue;
    }
    prev_was_target = false;
    for (int r : rec.receivers) {
      if (r >= static_cast<int>(counts.size())) counts.resize(r + 1, 0);
      ++counts[r];
    }

    if (options.fixed_target_arrivals > 0) {
      if (target_arrivals >= options.fixed_target_arrivals) {
        decide();
        return result;
      }
    } else if (target_arrivals % 256 == 0 && counts.size() > static_cast<std::size_t>(m)) {
      // adaptive stop: gap between the m-th and (m+1)-th counter beats a
      // normal-approximation bound on its sampling noise
      std::vector<int> order;
      ranked(order);
      const double cm = static_cast<double>(counts[order[m - 1]]);
      const double cn = static_cast<double>(counts[order[m]]);
      const double gap = std::fabs(cm - cn);
      if (gap > options.confidence_z * std::sqrt(cm + cn + 1.0)) {
        decide();
        return result;
      }
    }
  }

  if (options.fixed_target_arrivals > 0 && target_arrivals > 0 &&
      counts.size() >= static_cast<std::size_t>(m)) {
    // fixed budget larger than the trace: decide on what was seen
    decide();
    return result;
  }

  result.status = AttackStatus::exhausted;
  result.observations_used = target_arrivals;
  result.diagnostic = "trace exhausted before the stopping rule fired";
  return result;
}

}  // namespace mixq
