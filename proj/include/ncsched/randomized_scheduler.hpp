#pragma once

// Randomized rounding of the fractional primal-dual trajectories into integral
// transmission decisions, plus the waiting-coding queue transform that lets
// packets on either side wait for a coding partner.
//
// All schedulers share one mechanism: a single uniform u in [0,1) is drawn up
// front, and every time the aggregate fractional mass X(t) passes u + k for
// some integer k the relay sends one uncoded packet. The expected number of
// uncoded packets in slot t is exactly X(t) - X(t-1).

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <vector>

#include "ncsched/primal_dual.hpp"
#include "ncsched/relay_core.hpp"

namespace ncsched {

struct RoundingState {
  double u = 0.0;
  double x_pre = 0.0;
  Count shifts = 0;

  double threshold() const { return u + static_cast<double>(shifts); }
  // Number of points u + k in [x_pre, x); moves x_pre to x.
  Count advance(double x);
};

// u ~ Uniform[0,1) from a 64-bit Mersenne twister seeded with `seed`.
double draw_u(std::uint64_t seed);

// Per-slot diagnostics kept by every randomized scheduler.
struct SchedulerStats {
  Count max_crossings_per_slot = 0;
  Count max_transmissions_per_slot = 0;
  // Crossings that found no physical packet to send.
  Count idle_crossings = 0;
  std::vector<Count> shift_history;  // cumulative u shifts after each slot
};

// One-sided traffic: all Q1 packets arrive in slot 1 and Q2 packets leave on
// arrival, coded whenever a Q1 packet is still waiting.
class OneSidedScheduler : public SchedulingPolicy {
 public:
  OneSidedScheduler(const CostModel& cm, double u);

  Decision decide(const RelayQueues& queues, SlotArrivals arrivals, Slot t) override;

  const OneSidedPrimalDual<double>& state() const { return *pd_; }
  const RoundingState& rounding() const { return rs_; }
  const SchedulerStats& stats() const { return stats_; }

 private:
  CostModel cm_;
  std::unique_ptr<OneSidedPrimalDual<double>> pd_;
  RoundingState rs_;
  Count n2_ = 0;
  SchedulerStats stats_;
};

// Waiting Q1 packets tracked by primal-dual id, so a rounding crossing can
// pick which physical packet leaves.
class WaitingPackets {
 public:
  void add(PacketId id) { ids_.push_back(id); }
  bool contains(PacketId id) const;
  bool remove(PacketId id);
  // Most recent waiting packet; false when empty.
  bool pop_latest(PacketId* id);
  // The waiting packet with the largest x, ties to the earliest arrival.
  template <typename Scalar>
  bool pop_largest(const std::vector<PdPacket<Scalar>>& packets, PacketId* id);
  Count size() const { return static_cast<Count>(ids_.size()); }
  bool empty() const { return ids_.empty(); }

 private:
  std::vector<PacketId> ids_;  // ascending
};

enum class TwoSidedMode { Unconstrained, Constrained };

// Two-sided traffic: Q1 packets wait, Q2 packets leave on arrival. Each Q2
// arrival codes with the constrained packet the LIFO rule removes (or, if that
// one already left uncoded, with the newest waiting packet).
class TwoSidedScheduler : public SchedulingPolicy {
 public:
  TwoSidedScheduler(const CostModel& cm, double u, TwoSidedMode mode);

  Decision decide(const RelayQueues& queues, SlotArrivals arrivals, Slot t) override;

  const TwoSidedPrimalDual<double>& state() const { return *pd_; }
  const SchedulerStats& stats() const { return stats_; }

 private:
  CostModel cm_;
  TwoSidedMode mode_;
  std::unique_ptr<TwoSidedPrimalDual<double>> pd_;
  RoundingState rs_;
  WaitingPackets waiting_;
  SchedulerStats stats_;
};

enum class Side { Q1, Q2 };

struct WaitingCodingQueues {
  Count qw = 0;
  Side owner = Side::Q1;
  Count qc = 0;  // coded pairs formed in the latest slot
};

struct RouteResult {
  WaitingCodingQueues next;
  Count coded = 0;
  bool flip = false;
};

// Same-side arrivals join Q_w; up to Q_w + same-side arrivals of the other
// side code at once; any excess becomes the new Q_w content on the other side.
RouteResult waiting_coding_route(const WaitingCodingQueues& wc, SlotArrivals arrivals);

// The scheduler used in simulation: waiting-coding transform, two-sided
// primal-dual updates suppressed in slots that code, and shared-u rounding.
// At most one transmission per slot; arrivals must be at most one per queue
// per slot.
class ProposedPolicy : public SchedulingPolicy {
 public:
  ProposedPolicy(const CostModel& cm, double u);

  Decision decide(const RelayQueues& queues, SlotArrivals arrivals, Slot t) override;

  const WaitingCodingQueues& waiting_coding() const { return wc_; }
  const SchedulerStats& stats() const { return stats_; }
  double total_x() const { return base_x_ + pd_->total_x(); }
  Count side_flips() const { return flips_; }

 private:
  CostModel cm_;
  std::unique_ptr<TwoSidedPrimalDual<double>> pd_;
  double base_x_ = 0.0;
  RoundingState rs_;
  WaitingCodingQueues wc_;
  WaitingPackets waiting_;
  Count flips_ = 0;
  SchedulerStats stats_;
};

// Defers arrivals beyond one per queue and slot to the next free slots.
ArrivalPattern spread_arrivals(const ArrivalPattern& pattern);

// CSV `slot,coded,uncoded_q1,uncoded_q2,u_shift`.
void write_decision_trace_csv(std::ostream& out, const std::vector<Decision>& decisions,
                              const std::vector<Count>& shifts);

template <typename Scalar>
bool WaitingPackets::pop_largest(const std::vector<PdPacket<Scalar>>& packets, PacketId* id) {
  if (ids_.empty()) return false;
  std::size_t best = 0;
  for (std::size_t k = 1; k < ids_.size(); ++k) {
    if (packets[static_cast<std::size_t>(ids_[k] - 1)].x >
        packets[static_cast<std::size_t>(ids_[best] - 1)].x)
      best = k;
  }
  *id = ids_[best];
  ids_.erase(ids_.begin() + static_cast<std::ptrdiff_t>(best));
  return true;
}

}  // namespace ncsched
