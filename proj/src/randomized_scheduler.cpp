#include "ncsched/randomized_scheduler.hpp"

#include <algorithm>
#include <ostream>
#include <random>
#include <stdexcept>

namespace ncsched {

Count RoundingState::advance(double x) {
  Count n = 0;
  while (threshold() < x) {
    ++shifts;
    ++n;
  }
  x_pre = std::max(x_pre, x);
  return n;
}

double draw_u(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

namespace {

void require_unit_interval(double u) {
  if (!(u >= 0.0 && u < 1.0)) throw RejectedInput("rounding threshold must lie in [0,1)");
}

void note(SchedulerStats& stats, Count crossings, const Decision& d, const RoundingState& rs) {
  stats.max_crossings_per_slot = std::max(stats.max_crossings_per_slot, crossings);
  stats.max_transmissions_per_slot = std::max(stats.max_transmissions_per_slot, d.total());
  stats.shift_history.push_back(rs.shifts);
}

}  // namespace

OneSidedScheduler::OneSidedScheduler(const CostModel& cm, double u) : cm_(cm) {
  require_unit_interval(u);
  rs_.u = u;
}

Decision OneSidedScheduler::decide(const RelayQueues& q, SlotArrivals a, Slot t) {
  if (t == 1) {
    pd_ = std::make_unique<OneSidedPrimalDual<double>>(q.q1, cm_);
  } else if (a.a1 > 0) {
    throw RejectedInput("one-sided scheduler accepts Q1 arrivals in slot 1 only");
  }
  n2_ += a.a2;
  pd_->step(t, n2_);
  Count crossings = rs_.advance(pd_->total_x());

  Decision d;
  d.coded = std::min(q.q1, a.a2);
  d.uncoded_q1 = std::min(crossings, q.q1 - d.coded);
  stats_.idle_crossings += crossings - d.uncoded_q1;
  d.uncoded_q2 = q.q2 - d.coded;
  note(stats_, crossings, d, rs_);
  return d;
}

bool WaitingPackets::contains(PacketId id) const {
  return std::binary_search(ids_.begin(), ids_.end(), id);
}

bool WaitingPackets::remove(PacketId id) {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return false;
  ids_.erase(it);
  return true;
}

bool WaitingPackets::pop_latest(PacketId* id) {
  if (ids_.empty()) return false;
  *id = ids_.back();
  ids_.pop_back();
  return true;
}

namespace {

// Pair each packet the constraint set just dropped with a physical packet:
// itself when still waiting, otherwise the newest waiting one.
Count code_removed(const std::vector<PacketId>& removed, WaitingPackets& waiting) {
  Count coded = 0;
  for (PacketId id : removed) {
    PacketId other = 0;
    if (waiting.remove(id) || waiting.pop_latest(&other)) ++coded;
  }
  return coded;
}

template <typename Scalar>
Count send_uncoded(Count crossings, const std::vector<PdPacket<Scalar>>& packets,
                   WaitingPackets& waiting) {
  Count sent = 0;
  PacketId id = 0;
  while (sent < crossings && waiting.pop_largest(packets, &id)) ++sent;
  return sent;
}

}  // namespace

TwoSidedScheduler::TwoSidedScheduler(const CostModel& cm, double u, TwoSidedMode mode)
    : cm_(cm), mode_(mode), pd_(std::make_unique<TwoSidedPrimalDual<double>>(cm)) {
  require_unit_interval(u);
  rs_.u = u;
}

Decision TwoSidedScheduler::decide(const RelayQueues& q, SlotArrivals a, Slot t) {
  if (q.q1 - a.a1 != waiting_.size())
    throw std::logic_error("two-sided scheduler lost track of the Q1 queue");
  PacketId first_new = static_cast<PacketId>(pd_->packets().size()) + 1;
  if (mode_ == TwoSidedMode::Constrained)
    pd_->step_constrained(t, a);
  else
    pd_->step(t, a);
  for (Count k = 0; k < a.a1; ++k) waiting_.add(first_new + k);

  Decision d;
  d.coded = code_removed(pd_->last_removed(), waiting_);
  Count crossings = rs_.advance(pd_->total_x());
  d.uncoded_q1 = send_uncoded(crossings, pd_->packets(), waiting_);
  stats_.idle_crossings += crossings - d.uncoded_q1;
  d.uncoded_q2 = q.q2 - d.coded;
  if (mode_ == TwoSidedMode::Constrained && d.total() > 1)
    throw std::logic_error("constrained scheduler produced more than one transmission");
  note(stats_, crossings, d, rs_);
  return d;
}

RouteResult waiting_coding_route(const WaitingCodingQueues& wc, SlotArrivals a) {
  if (wc.qw < 0 || a.a1 < 0 || a.a2 < 0) throw RejectedInput("queue counts must be non-negative");
  Count same = wc.owner == Side::Q1 ? a.a1 : a.a2;
  Count other = wc.owner == Side::Q1 ? a.a2 : a.a1;
  Count waiting = wc.qw + same;
  RouteResult r;
  r.coded = std::min(waiting, other);
  r.next.qc = r.coded;
  if (other > waiting) {
    r.flip = true;
    r.next.owner = wc.owner == Side::Q1 ? Side::Q2 : Side::Q1;
    r.next.qw = other - waiting;
  } else {
    r.next.owner = wc.owner;
    r.next.qw = waiting - r.coded;
  }
  return r;
}

ProposedPolicy::ProposedPolicy(const CostModel& cm, double u)
    : cm_(cm), pd_(std::make_unique<TwoSidedPrimalDual<double>>(cm)) {
  require_unit_interval(u);
  rs_.u = u;
}

Decision ProposedPolicy::decide(const RelayQueues& q, SlotArrivals a, Slot t) {
  if (a.a1 > 1 || a.a2 > 1)
    throw RejectedInput("arrivals must be spread to at most one per queue per slot");
  Count q_owner = wc_.owner == Side::Q1 ? q.q1 : q.q2;
  Count q_other = wc_.owner == Side::Q1 ? q.q2 : q.q1;
  Count same = wc_.owner == Side::Q1 ? a.a1 : a.a2;
  Count other = wc_.owner == Side::Q1 ? a.a2 : a.a1;
  if (q_owner - same != waiting_.size() || q_other != other)
    throw std::logic_error("waiting-coding state out of step with the relay queues");

  RouteResult r = waiting_coding_route({waiting_.size(), wc_.owner, 0}, a);
  Decision d;
  if (r.flip) {
    // Q_w changes sides: the constrained packets of the old side are gone and
    // the arrivals that could not code start a fresh primal-dual state.
    base_x_ += pd_->total_x();
    pd_ = std::make_unique<TwoSidedPrimalDual<double>>(cm_);
    ++flips_;
    PacketId first_new = 1;
    pd_->advance(t, 0, 0, r.next.qw, true);
    for (Count k = 0; k < r.next.qw; ++k) waiting_.add(first_new + k);
  } else {
    PacketId first_new = static_cast<PacketId>(pd_->packets().size()) + 1;
    pd_->advance(t, same, r.coded, 0, r.coded == 0);
    for (Count k = 0; k < same; ++k) waiting_.add(first_new + k);
    d.coded = code_removed(pd_->last_removed(), waiting_);
    if (d.coded != r.coded) throw std::logic_error("coded pairs out of step with Q_w");
  }
  wc_ = r.next;

  Count crossings = rs_.advance(base_x_ + pd_->total_x());
  Count sent = send_uncoded(crossings, pd_->packets(), waiting_);
  stats_.idle_crossings += crossings - sent;
  wc_.qw = waiting_.size();
  (wc_.owner == Side::Q1 ? d.uncoded_q1 : d.uncoded_q2) = sent;
  if (d.total() > 1)
    throw std::logic_error("proposed policy produced more than one transmission");
  note(stats_, crossings, d, rs_);
  return d;
}

ArrivalPattern spread_arrivals(const ArrivalPattern& pattern) {
  auto spread = [](const std::vector<Count>& a) {
    std::vector<Count> out;
    Count backlog = 0;
    for (std::size_t t = 0; t < a.size() || backlog > 0; ++t) {
      if (t < a.size()) backlog += a[t];
      Count now = backlog > 0 ? 1 : 0;
      out.push_back(now);
      backlog -= now;
    }
    return out;
  };
  std::vector<Count> a1 = spread(pattern.a1_series());
  std::vector<Count> a2 = spread(pattern.a2_series());
  std::size_t n = std::max(a1.size(), a2.size());
  a1.resize(n, 0);
  a2.resize(n, 0);
  return ArrivalPattern(std::move(a1), std::move(a2));
}

void write_decision_trace_csv(std::ostream& out, const std::vector<Decision>& decisions,
                              const std::vector<Count>& shifts) {
  out << "slot,coded,uncoded_q1,uncoded_q2,u_shift\n";
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    const Decision& d = decisions[i];
    out << i + 1 << ',' << d.coded << ',' << d.uncoded_q1 << ',' << d.uncoded_q2 << ','
        << (i < shifts.size() ? shifts[i] : 0) << '\n';
  }
}

}  // namespace ncsched
