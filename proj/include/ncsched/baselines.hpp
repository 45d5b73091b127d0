#pragma once

// Threshold baselines and the ski-rental instance builder.
//
// A threshold policy codes whenever both queues hold packets and otherwise
// sends one uncoded packet when the non-empty queue is longer than its
// threshold.

#include <functional>
#include <iosfwd>
#include <vector>

#include "ncsched/relay_core.hpp"

namespace ncsched {

struct Thresholds {
  Count theta1 = 0;
  Count theta2 = 0;

  friend bool operator==(const Thresholds&, const Thresholds&) = default;
};

// `one_tx` limits the relay to one transmission per slot; coding goes first.
Decision threshold_decide(const Thresholds& th, const RelayQueues& q, bool one_tx = false);

class ThresholdPolicy : public SchedulingPolicy {
 public:
  explicit ThresholdPolicy(Thresholds th, bool one_tx = false) : th_(th), one_tx_(one_tx) {}
  Decision decide(const RelayQueues& q, SlotArrivals, Slot) override {
    return threshold_decide(th_, q, one_tx_);
  }
  const Thresholds& thresholds() const { return th_; }

 private:
  Thresholds th_;
  bool one_tx_;
};

// The fixed online baseline: both thresholds equal floor(C).
Thresholds c_threshold(const CostModel& cm);

struct ThresholdRun {
  double cost = 0.0;
  Count coded = 0;
};

// Tight loop equivalent to run_policy without drain for a ThresholdPolicy.
ThresholdRun simulate_threshold(const ArrivalPattern& pattern, const Thresholds& th,
                                const CostModel& cm, bool one_tx);

struct ThresholdGridPoint {
  Thresholds th;
  double mean_cost = 0.0;
};

struct ThresholdSearch {
  Thresholds best;
  double best_cost = 0.0;
  std::vector<ThresholdGridPoint> grid;  // theta1-major order
};

// Exhaustive search over {0..max_threshold}^2; ties go to the
// lexicographically smallest pair. `mean_cost` evaluates one grid point.
ThresholdSearch optimize_thresholds(Count max_threshold,
                                    const std::function<double(const Thresholds&)>& mean_cost);

// Single-relay search averaging simulate_threshold over `patterns`.
ThresholdSearch optimize_thresholds(const std::vector<ArrivalPattern>& patterns,
                                    const CostModel& cm, Count max_threshold, bool one_tx);

// Default search range end: ceil(C).
Count default_max_threshold(const CostModel& cm);

// CSV `theta1,theta2,mean_cost`.
void write_threshold_sweep_csv(std::ostream& out, const ThresholdSearch& search);

// One Q1 packet in slot 1 and one Q2 packet in slot T: the relay idling in a
// slot is the skier renting, an uncoded transmission is buying.
ArrivalPattern ski_rental_adapter(Slot last_day);

}  // namespace ncsched
