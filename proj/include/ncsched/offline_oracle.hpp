#pragma once

// Exact offline optima.
//
// One-sided traffic (all Q1 packets present in slot 1): the LP relaxation has
// no integrality gap, so OPT is a minimum over integer uncoded counts x.
//
// Two-sided traffic (Q2 packets leave on arrival): a LIFO constraint-set
// construction yields one waiting interval [alpha_i, beta_i] per Q1 packet and
// OPT = sum_i min(beta_i - alpha_i + 1, C). A memoized exhaustive matching
// search computes the same optimum independently for small instances.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ncsched/rational.hpp"
#include "ncsched/relay_core.hpp"

namespace ncsched {

using PacketId = std::int64_t;  // 1-based, Q1 arrival order

struct ConstraintSetTrace {
  // sets[t-1] = I(t), ascending packet ids, for t = 1..horizon.
  std::vector<std::vector<PacketId>> sets;
  // removed[t-1] = packets removed in slot t, in removal order.
  std::vector<std::vector<PacketId>> removed;
  // Per packet (index id-1).
  std::vector<Slot> arrival_slot;
  std::vector<std::optional<Slot>> removal_slot;

  Slot horizon() const { return static_cast<Slot>(sets.size()); }
  // I(t); slots past the horizon keep the final set.
  const std::vector<PacketId>& at(Slot t) const;
};

ConstraintSetTrace identify_constraints(const ArrivalPattern& pattern);

struct WaitingInterval {
  PacketId packet = 0;
  Slot alpha = 0;
  // beta < alpha encodes an empty interval (coded in its arrival slot).
  Slot beta = 0;
  // True when the packet was never removed; beta then holds the sentinel.
  bool open_ended = false;

  Slot length() const { return beta >= alpha ? beta - alpha + 1 : 0; }
};

struct ConstraintIntervals {
  std::vector<WaitingInterval> intervals;
};

// beta = removal slot - 1, or the drain-window end for never-removed packets.
ConstraintIntervals extract_intervals(const ConstraintSetTrace& trace,
                                      const ArrivalPattern& pattern, const CostModel& cm);

// sum_i min(beta_i - alpha_i + 1, C).
Rational opt_two_sided_closed_form(const ConstraintIntervals& intervals, const CostModel& cm);

// Convenience: trace, intervals, closed form.
Rational opt_two_sided(const ArrivalPattern& pattern, const CostModel& cm);

struct OneSidedOptimum {
  Rational cost;
  Count x_star = 0;
};

// LP objective with z eliminated: C*x + sum_t max(N1 - n2(t) - x, 0) over the
// drain window. Defined for real x; requires a one-sided pattern.
double one_sided_objective(const ArrivalPattern& pattern, const CostModel& cm, double x);
Rational one_sided_objective_exact(const ArrivalPattern& pattern, const CostModel& cm, Count x);

// Integer minimum over x in {max(0, N1 - N2), ..., N1}; ties -> smallest x.
OneSidedOptimum opt_one_sided(const ArrivalPattern& pattern, const CostModel& cm);

// Real-valued minimum of the one-sided LP, found by ternary search over x on
// the convex piecewise-linear objective.
double one_sided_lp_continuous_min(const ArrivalPattern& pattern, const CostModel& cm);

inline constexpr Count kBruteForceMaxPackets = 8;

// Minimum over partial matchings of Q1 packets to not-earlier Q2 packets of
// sum_matched min(wait, C) + C * unmatched. Rejects more than 8 packets per side.
Rational opt_two_sided_bruteforce(const ArrivalPattern& pattern, const CostModel& cm);

enum class LpKind { OneSidedPrimal, TwoSidedPrimal, OneSidedDual, TwoSidedDual };

// Instantiated LP in CPLEX LP text format over slots 1..drain_end.
std::string lp_export(const ArrivalPattern& pattern, const CostModel& cm, LpKind which);

// CSV `packet,alpha,beta`.
void write_intervals_csv(std::ostream& out, const ConstraintIntervals& intervals);

}  // namespace ncsched
