#pragma once

// Slotted simulation of a single relay and of a line of relays under the
// truncated-Gaussian Bernoulli traffic model, plus empirical competitive
// ratios against the exact offline optimum.

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <vector>

#include "ncsched/baselines.hpp"
#include "ncsched/relay_core.hpp"

namespace ncsched {

struct TrafficSpec {
  double p1 = 0.5;
  double p2 = 0.1;
  double sigma2 = 0.0;
  Slot horizon = 10000;
};

void validate(const TrafficSpec& spec);

// Per slot and queue: P ~ N(p, sigma2) clipped to [0,1], then one Bernoulli(P)
// arrival. Draw order per slot: P1, P2, arrival 1, arrival 2.
ArrivalPattern gen_bernoulli_truncated_gaussian(const TrafficSpec& spec, std::mt19937_64& rng);

// E[clip(P, 0, 1)] for P ~ N(p, sigma2).
double truncated_mean(double p, double sigma2);

// Independent stream per replication: seed_seq{base, rep, stream}.
std::mt19937_64 replication_rng(std::uint64_t seed_base, std::uint64_t rep, std::uint64_t stream);

enum class PolicyKind { Proposed, OptimizedThreshold, CThreshold, SubOptimizedThreshold };
const char* policy_name(PolicyKind kind);

struct ReplicationOutcome {
  double cost = 0.0;
  Count coded = 0;
};

struct PolicySummary {
  PolicyKind kind = PolicyKind::Proposed;
  std::vector<ReplicationOutcome> reps;
  Thresholds thresholds;  // threshold policies only

  double mean_cost() const;
  double mean_coded() const;
};

struct SingleRelayResult {
  PolicySummary proposed, optimized, c_threshold;
  ThresholdSearch search;
};

// Runs the proposed policy and both threshold baselines on the same
// `replications` traffic samples (one transmission per slot, no drain window).
// The optimized thresholds minimize the mean cost over those samples.
SingleRelayResult run_single_relay(const TrafficSpec& spec, const CostModel& cm,
                                   Count replications, std::uint64_t seed_base,
                                   Count max_threshold = -1);

// One relay; equivalent to run_policy(pattern, policy, cm, {drain=false}).
ReplicationOutcome run_relay(const ArrivalPattern& pattern, SchedulingPolicy& policy,
                             const CostModel& cm);

// Line of R relays. Relay 1's Q1 receives the left source, relay R's Q2 the
// right source; pattern.a1/a2 hold the two external streams. A transmission in
// slot t reaches the neighbouring relay in slot t+1.
struct LineNetworkResult {
  std::vector<CostLedger> relays;
  double total_cost = 0.0;
  Count coded = 0;
  Count delivered_right = 0;  // absorbed by the right sink
  Count delivered_left = 0;
  Count max_transmissions_per_slot = 0;
  // Slot in which each absorbed packet reached its sink.
  std::vector<Slot> right_sink_slots, left_sink_slots;
};

LineNetworkResult run_line_network(const ArrivalPattern& external,
                                   std::vector<std::unique_ptr<SchedulingPolicy>>& policies,
                                   const std::vector<CostModel>& costs);

using PolicyFactory = std::function<std::unique_ptr<SchedulingPolicy>(std::size_t relay)>;

struct LineNetworkSummary {
  PolicySummary proposed, sub_optimized;
  ThresholdSearch search;
};

// Proposed policy at every relay against the best shared (left, right)
// threshold pair, both on the same traffic samples.
LineNetworkSummary run_line_network_sweep_point(const TrafficSpec& spec,
                                                const std::vector<CostModel>& costs,
                                                Count replications, std::uint64_t seed_base,
                                                Count max_threshold = -1);

using RandomizedFactory = std::function<std::unique_ptr<SchedulingPolicy>(double u)>;

struct ExpectedRatio {
  double mean_reduced_cost = 0.0;
  double opt = 0.0;
  double ratio = 1.0;
  bool infinite = false;
};

// Monte-Carlo over `draws` values of u: mean of J - C*N2 (drain window on)
// divided by `opt`.
ExpectedRatio expected_ratio(const ArrivalPattern& pattern, const RandomizedFactory& make,
                             const CostModel& cm, double opt, Count draws,
                             std::uint64_t seed);

struct RatioStats {
  std::vector<double> samples;
  double mean = 0.0;
  double max = 0.0;
  bool infinite = false;  // some J > 0 with OPT = 0
};

// J/OPT on reduced costs. 0/0 counts as 1.
double reduced_ratio(double j_reduced, double opt, bool* infinite);
RatioStats summarize_ratios(const std::vector<double>& samples, bool infinite);

}  // namespace ncsched
