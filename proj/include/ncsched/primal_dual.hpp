#pragma once

// Fractional online primal-dual state machines.
//
// Each waiting Q1 packet i carries a fractional "uncoded" mass x_i. Every slot
// in which the packet is still constrained and x_i < 1, the machine charges a
// holding term z_i(t) = 1 - x_i, raises w_i(t) = 1 on the dual side, and grows
//
//     x_i <- x_i * (1 + 1/C) + 1 / (theta * C),
//     theta = (1 + 1/C)^floor(C) - 1,
//
// so that after exactly floor(C) updates x_i == 1 and the packet freezes.
// Both objectives grow by (1 + 1/theta) and 1 per updated packet, which is the
// source of the 1 + 1/theta competitive bound.
//
// The machines are templates over the scalar: `Rational` for exact golden
// checks, `double` for simulation.

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <vector>

#include "ncsched/io.hpp"
#include "ncsched/offline_oracle.hpp"
#include "ncsched/rational.hpp"
#include "ncsched/relay_core.hpp"

namespace ncsched {

struct Theta {
  double c = 0.0;
  Count floor_c = 0;
  double value = 0.0;
  // Present when floor(C) is small enough for exact powers.
  std::optional<Rational> exact;
};

inline constexpr Count kExactThetaMaxExponent = 4096;

// (1 + 1/C)^floor(C) - 1. Rejects C <= 1.
Theta compute_theta(double c);
inline Theta compute_theta(const CostModel& cm) { return compute_theta(cm.c()); }

// 1 + 1/theta(C): the fractional and expected competitive ratio.
double competitive_bound(double c);
Rational competitive_bound_exact(double c);

template <typename Scalar>
Scalar scalar_from(const Rational& r);
template <>
inline double scalar_from<double>(const Rational& r) { return to_double(r); }
template <>
inline Rational scalar_from<Rational>(const Rational& r) { return r; }

// The x_i < 1 guard: exact for rationals, 1e-12 slack for doubles.
inline bool below_one(const Rational& x) { return x < 1; }
inline bool below_one(double x) { return x < 1.0 - 1e-12; }

template <typename Scalar>
struct PdPacket {
  Scalar x = 0;
  Count updates = 0;
  Slot arrival = 0;
  std::optional<Slot> removal;
};

template <typename Scalar>
struct PdTraceEntry {
  Slot slot = 0;
  PacketId packet = 0;
  Scalar x = 0;  // after the slot's update
  Scalar z = 0;
  int w = 0;
};

template <typename Scalar>
struct SlotUpdate {
  Scalar delta_x = 0;
  Scalar delta_primal = 0;
  Scalar delta_dual = 0;
  Count updated = 0;
  bool skipped = false;  // updates suppressed for this slot
};

template <typename Scalar>
class PrimalDualBase {
 public:
  const CostModel& cost_model() const { return cm_; }
  const Theta& theta() const { return theta_; }
  const std::vector<PdPacket<Scalar>>& packets() const { return packets_; }
  const std::vector<PdTraceEntry<Scalar>>& trace() const { return trace_; }

  Scalar total_x() const { return sum_x_; }
  Scalar total_z() const { return sum_z_; }
  Scalar primal() const { return c_ * sum_x_ + sum_z_; }
  Scalar dual() const { return dual_; }

  void write_trace_csv(std::ostream& out) const {
    out << "slot,packet,x_i,z_i,w_i\n";
    for (const auto& e : trace_)
      out << e.slot << ',' << e.packet << ',' << format_number(to_double(e.x)) << ','
          << format_number(to_double(e.z)) << ',' << e.w << '\n';
  }

 protected:
  PrimalDualBase(const CostModel& cm, bool record_trace)
      : cm_(cm), theta_(compute_theta(cm)), record_(record_trace) {
    Rational c = cm.exact_c();
    c_ = scalar_from<Scalar>(c);
    if (theta_.exact) {
      growth_ = scalar_from<Scalar>(1 + 1 / c);
      step_ = scalar_from<Scalar>(1 / (*theta_.exact * c));
    } else {
      growth_ = scalar_from<Scalar>(Rational(1.0 + 1.0 / cm.c()));
      step_ = scalar_from<Scalar>(Rational(1.0 / (theta_.value * cm.c())));
    }
  }

  PacketId add_packet(Slot t) {
    packets_.push_back({Scalar(0), 0, t, std::nullopt});
    return static_cast<PacketId>(packets_.size());
  }

  // One multiplicative-additive step on packet `id`; returns z_i(t).
  Scalar update(PacketId id, SlotUpdate<Scalar>& su) {
    auto& p = packets_[static_cast<std::size_t>(id - 1)];
    Scalar z = Scalar(1) - p.x;
    Scalar before = p.x;
    p.x = p.x * growth_ + step_;
    ++p.updates;
    Scalar dx = p.x - before;
    sum_x_ += dx;
    sum_z_ += z;
    su.delta_x += dx;
    su.delta_primal += c_ * dx + z;
    su.updated += 1;
    return z;
  }

  void record(Slot t, PacketId id, const Scalar& z, int w) {
    if (!record_) return;
    trace_.push_back({t, id, packets_[static_cast<std::size_t>(id - 1)].x, z, w});
  }

  CostModel cm_;
  Theta theta_;
  bool record_;
  Scalar c_{}, growth_{}, step_{};
  Scalar sum_x_{0}, sum_z_{0}, dual_{0};
  std::vector<PdPacket<Scalar>> packets_;
  std::vector<PdTraceEntry<Scalar>> trace_;
};

// One-sided traffic: all N1 packets present from slot 1; in slot t the packets
// n2(t)+1..N1 are the ones that may still be waiting.
template <typename Scalar>
class OneSidedPrimalDual : public PrimalDualBase<Scalar> {
  using Base = PrimalDualBase<Scalar>;

 public:
  OneSidedPrimalDual(Count n1, const CostModel& cm, bool record_trace = false)
      : Base(cm, record_trace), n1_(n1) {
    if (n1 < 0) throw RejectedInput("packet count must be non-negative");
    for (Count i = 0; i < n1; ++i) this->add_packet(1);
  }

  Count n1() const { return n1_; }
  // z(t) and w(t) per processed slot (tracing only).
  const std::vector<Scalar>& slot_z() const { return slot_z_; }
  const std::vector<int>& slot_w() const { return slot_w_; }

  SlotUpdate<Scalar> step(Slot t, Count n2_t) {
    SlotUpdate<Scalar> su;
    Scalar z_t = 0;
    // Packets in range share one update history, so either all of them
    // update or none do.
    for (Count i = std::max<Count>(n2_t, 0) + 1; i <= n1_; ++i) {
      if (below_one(this->packets_[static_cast<std::size_t>(i - 1)].x)) {
        Scalar z = this->update(i, su);
        z_t += z;
        this->record(t, i, z, 1);
      } else {
        this->record(t, i, Scalar(0), 0);
      }
    }
    int w = su.updated > 0 ? 1 : 0;
    if (w) {
      su.delta_dual = Scalar(n1_ - n2_t);
      this->dual_ += su.delta_dual;
    }
    if (this->record_) {
      slot_z_.push_back(z_t);
      slot_w_.push_back(w);
    }
    w_sum_ += w;
    return su;
  }

  Count w_sum() const { return w_sum_; }

 private:
  Count n1_;
  Count w_sum_ = 0;
  std::vector<Scalar> slot_z_;
  std::vector<int> slot_w_;
};

// Two-sided traffic: Q1 packets arrive at any slot and wait; Q2 packets leave
// on arrival. The constraint set I(t) is maintained LIFO: each Q2 arrival
// removes the most recent constrained packet.
template <typename Scalar>
class TwoSidedPrimalDual : public PrimalDualBase<Scalar> {
  using Base = PrimalDualBase<Scalar>;

 public:
  explicit TwoSidedPrimalDual(const CostModel& cm, bool record_trace = false)
      : Base(cm, record_trace) {}

  // Current I(t), ascending ids.
  const std::vector<PacketId>& active() const { return active_; }
  // Packets removed by the most recent slot, in removal order.
  const std::vector<PacketId>& last_removed() const { return last_removed_; }

  // Insert A1(t) packets, remove up to A2(t) most recent ones, then update.
  SlotUpdate<Scalar> step(Slot t, SlotArrivals a) { return advance(t, a.a1, a.a2, 0, true); }

  // Same set maintenance, but no updates in slots with a Q2 arrival. Arrivals
  // must already be spread to at most one per queue and slot.
  SlotUpdate<Scalar> step_constrained(Slot t, SlotArrivals a) {
    if (a.a1 > 1 || a.a2 > 1)
      throw RejectedInput("constrained step needs at most one arrival per queue per slot");
    return advance(t, a.a1, a.a2, 0, a.a2 == 0);
  }

  // General form used by the waiting-coding system: `early` packets join,
  // `removals` leave LIFO, `late` packets join after the removals, and the
  // update loop runs only when `allow_updates` holds.
  SlotUpdate<Scalar> advance(Slot t, Count early, Count removals, Count late,
                             bool allow_updates) {
    SlotUpdate<Scalar> su;
    for (Count k = 0; k < early; ++k) active_.push_back(this->add_packet(t));
    last_removed_.clear();
    for (Count k = 0; k < removals && !active_.empty(); ++k) {
      PacketId victim = active_.back();
      active_.pop_back();
      this->packets_[static_cast<std::size_t>(victim - 1)].removal = t;
      last_removed_.push_back(victim);
    }
    for (Count k = 0; k < late; ++k) active_.push_back(this->add_packet(t));
    su.skipped = !allow_updates;
    // Older constrained packets have at least as many updates as newer ones,
    // so the frozen packets form a prefix of I(t) and can be skipped.
    frozen_ = std::min(frozen_, active_.size());
    for (std::size_t k = this->record_ ? 0 : frozen_; k < active_.size(); ++k) {
      PacketId i = active_[k];
      Scalar z = 0;
      int w = 0;
      if (allow_updates && below_one(x_of(i))) {
        z = this->update(i, su);
        w = 1;
      }
      this->record(t, i, z, w);
    }
    while (frozen_ < active_.size() && !below_one(x_of(active_[frozen_]))) ++frozen_;
    su.delta_dual = Scalar(su.updated);
    this->dual_ += su.delta_dual;
    return su;
  }

 private:
  const Scalar& x_of(PacketId i) const {
    return this->packets_[static_cast<std::size_t>(i - 1)].x;
  }

  std::vector<PacketId> active_;
  std::vector<PacketId> last_removed_;
  std::size_t frozen_ = 0;
};

}  // namespace ncsched
