#pragma once

// Slot-indexed queueing model of one relay: arrival patterns, queue dynamics,
// transmission decisions, and the per-slot transmission/holding cost shared by
// every policy and oracle in the library.
//
// Slots are 1-based. A slot t proceeds as: arrivals A(t) join the queues,
// the policy picks a decision D(t), the relay pays C per transmission plus one
// unit per packet still queued at the end of the slot.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ncsched/rational.hpp"

namespace ncsched {

using Slot = std::int64_t;
using Count = std::int64_t;

// Raised for inputs that violate an operation's contract.
class RejectedInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SlotArrivals {
  Count a1 = 0;
  Count a2 = 0;

  friend bool operator==(const SlotArrivals&, const SlotArrivals&) = default;
};

class ArrivalPattern {
 public:
  ArrivalPattern() = default;
  ArrivalPattern(std::vector<Count> a1, std::vector<Count> a2);

  // `horizon` idle slots.
  static ArrivalPattern idle(Slot horizon);
  // Builds a pattern from per-packet arrival slots (repeats allowed). The
  // horizon is at least the last listed slot.
  static ArrivalPattern from_slots(const std::vector<Slot>& q1_slots,
                                   const std::vector<Slot>& q2_slots, Slot horizon = 0);

  Slot horizon() const { return static_cast<Slot>(a1_.size()); }
  bool empty() const { return a1_.empty(); }

  // Arrivals in slot t; zero outside 1..horizon.
  Count a1(Slot t) const;
  Count a2(Slot t) const;
  SlotArrivals at(Slot t) const { return {a1(t), a2(t)}; }

  Count n1() const { return cum1_.empty() ? 0 : cum1_.back(); }
  Count n2() const { return cum2_.empty() ? 0 : cum2_.back(); }
  // Cumulative arrivals through slot t (inclusive).
  Count n1_through(Slot t) const;
  Count n2_through(Slot t) const;

  // Zero when there are no arrivals at all.
  Slot last_arrival_slot() const;
  // All Q1 packets present in slot 1 and nothing later.
  bool is_one_sided() const;

  // Arrival slot of every packet in arrival order (T^(1)_i, T^(2)_j).
  std::vector<Slot> q1_arrival_slots() const;
  std::vector<Slot> q2_arrival_slots() const;

  const std::vector<Count>& a1_series() const { return a1_; }
  const std::vector<Count>& a2_series() const { return a2_; }

  friend bool operator==(const ArrivalPattern& x, const ArrivalPattern& y) {
    return x.a1_ == y.a1_ && x.a2_ == y.a2_;
  }

 private:
  std::vector<Count> a1_, a2_;
  std::vector<Count> cum1_, cum2_;
};

struct RelayQueues {
  Count q1 = 0;
  Count q2 = 0;

  Count total() const { return q1 + q2; }
  friend bool operator==(const RelayQueues&, const RelayQueues&) = default;
};

// D(t) split into coded pairs and uncoded packets per queue. A coded packet is
// a single transmission that serves one packet of each queue.
struct Decision {
  Count coded = 0;
  Count uncoded_q1 = 0;
  Count uncoded_q2 = 0;

  Count total() const { return coded + uncoded_q1 + uncoded_q2; }
  Count uncoded() const { return uncoded_q1 + uncoded_q2; }

  // Splits `k` transmissions: coded pairs first, then uncoded packets from
  // whichever queue still holds packets (Q1 first).
  static Decision greedy(const RelayQueues& q, Count k);

  friend bool operator==(const Decision&, const Decision&) = default;
};

// Throws RejectedInput when the decision cannot be served from `q`.
void validate(const Decision& d, const RelayQueues& q);

class CostModel {
 public:
  // Consistent costs: every transmission costs `c` (> 1) holding-slots.
  explicit CostModel(double c);
  // Non-consistent costs: coded `c1`, uncoded `c2`; behaves as 2*c2 - c1.
  static CostModel non_consistent(double c1, double c2);

  double c() const { return c_; }
  Rational exact_c() const { return to_rational(c_); }
  Count floor_c() const;
  Count ceil_c() const;
  const std::optional<std::pair<double, double>>& split() const { return split_; }

 private:
  double c_;
  std::optional<std::pair<double, double>> split_;
};

// 2*c2 - c1. Rejects c2 <= 0, c1 < c2, and negative results.
double effective_cost(double c1, double c2);

struct SlotCost {
  double tx = 0.0;
  double hold = 0.0;
};

// `queued` is Q(t), after the slot's arrivals and before service.
SlotCost slot_cost(const RelayQueues& queued, const Decision& d, const CostModel& cm);

// Q(t+1) = Q(t) - served + A(t+1). Rejects invalid decisions.
RelayQueues queue_step(const RelayQueues& q, const Decision& d, SlotArrivals next);

struct CostLedger {
  double tx_cost = 0.0;
  double holding_cost = 0.0;
  Count coded = 0;
  Count uncoded_q1 = 0;
  Count uncoded_q2 = 0;
  std::vector<SlotCost> per_slot;  // empty unless tracing

  double total() const { return tx_cost + holding_cost; }
  Count transmissions() const { return coded + uncoded_q1 + uncoded_q2; }
  void add(const SlotCost& s, const Decision& d, bool trace);
};

class SchedulingPolicy {
 public:
  virtual ~SchedulingPolicy() = default;
  // Decision for slot t given Q(t) (arrivals already enqueued) and A(t).
  virtual Decision decide(const RelayQueues& queues, SlotArrivals arrivals, Slot t) = 0;
};

struct RunOptions {
  // Simulate `horizon + floor(C) + 1` slots instead of `horizon`.
  bool drain = true;
  bool trace = true;
};

struct RunResult {
  CostLedger ledger;
  RelayQueues final_queues;
  std::vector<Decision> decisions;  // empty unless tracing
  Slot slots = 0;
};

// Last simulated slot with the drain window applied.
Slot drain_end(const ArrivalPattern& pattern, const CostModel& cm);

RunResult run_policy(const ArrivalPattern& pattern, SchedulingPolicy& policy,
                     const CostModel& cm, const RunOptions& options = {});

// CSV `slot,a1,a2`, one row per slot, slots 1-indexed.
void write_pattern_csv(std::ostream& out, const ArrivalPattern& pattern);
ArrivalPattern read_pattern_csv(std::istream& in);
// CSV `slot,tx_cost,holding_cost`; requires a traced ledger.
void write_ledger_csv(std::ostream& out, const CostLedger& ledger);

}  // namespace ncsched
