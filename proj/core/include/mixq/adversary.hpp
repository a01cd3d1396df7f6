#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "mixq/trace.hpp"

namespace mixq {

enum class AttackStatus { success, exhausted, impossible };

struct AttackResult {
  AttackStatus status = AttackStatus::exhausted;
  std::vector<int> identified;           // sorted receiver ids, valid on success
  std::uint64_t observations_used = 0;   // trace records consumed
  Time ttd = 0.0;                        // simulation time at identification
  std::uint64_t rule_a_trials = 0;       // stateful attack only, see below
  std::string diagnostic;
};

/// The adversary's disjoint candidate sets R_1..R_j under refinement; each
/// holds exactly one true receiver of the target once phase 1 is complete.
using CandidateSets = std::vector<std::set<int>>;

struct IntersectionAttackOptions {
  /// Invoked after every candidate-set change (collection or refinement).
  std::function<void(const CandidateSets&)> on_update;
};

/// Intersection attack on a batch-mix trace. The batch mix is a
/// deterministic function of its arrival sequence, so the attack replays
/// the dynamics on the observed arrivals to tag exactly which departures
/// carry a message of the target. Tagged recipient sets are first collected
/// into m pairwise-disjoint candidates, then refined by tagged sets that
/// intersect exactly one candidate. Immediately impossible when k*m > n.
AttackResult intersection_attack(const std::vector<ObservationRecord>& trace,
                                 int target, int m, int n, int k,
                                 const IntersectionAttackOptions& options = {});

/// Instants (trace indices of arrival records) at which every queue in the
/// mix was empty. This is the state knowledge the stateful attack assumes.
struct EmptyStateOracle {
  std::vector<std::uint32_t> empty_arrival_indices;
};

/// Stateful attack on a sampling-mix trace.
/// Rule A: a target arrival at an empty mix followed by a same-instant
/// singleton departure confirms that receiver as a partner.
/// Rule B: a departure that provably carries no target message (no target
/// arrival since the mix was last empty) eliminates its receivers from the
/// candidate pool.
/// `rule_a_trials` reports the number of empty-mix target arrivals until
/// Rule A first fired.
struct StatefulAttackOptions {
  /// Rule B usually concludes before Rule A ever fires; disable it to
  /// measure the Rule A trial count without censoring.
  bool use_rule_b = true;
};

AttackResult stateful_sampling_attack(const std::vector<ObservationRecord>& trace,
                                      const EmptyStateOracle* oracle,
                                      int target, int m, int n,
                                      const StatefulAttackOptions& options = {});

enum class FrequencyDecisionRule {
  automatic,      // most frequent if p_a > (1-p_a)/(n-1), least otherwise
  most_frequent,  // forced direction (diagnostics / calibration runs)
  least_frequent
};

struct FrequencyAttackOptions {
  FrequencyDecisionRule rule = FrequencyDecisionRule::automatic;
  std::uint64_t fixed_target_arrivals = 0;  // 0 = adaptive stopping
  double confidence_z = 2.576;              // 99% two-sided normal bound
};

/// Stateless frequency attack on a sampling-mix trace: count, per receiver,
/// co-departures with target arrivals, then take the m most (or least)
/// frequent receivers. Refuses in automatic mode when p_a = 1/n, where
/// departure frequencies carry no information about the target.
AttackResult stateless_frequency_attack(const std::vector<ObservationRecord>& trace,
                                        int target, int m, int n, double p_a,
                                        const FrequencyAttackOptions& options = {});

}  // namespace mixq
