#include "ncsched/offline_oracle.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <sstream>

#include "ncsched/io.hpp"

namespace ncsched {

const std::vector<PacketId>& ConstraintSetTrace::at(Slot t) const {
  static const std::vector<PacketId> kEmpty;
  if (t < 1 || sets.empty()) return kEmpty;
  if (t > horizon()) return sets.back();
  return sets[static_cast<std::size_t>(t - 1)];
}

ConstraintSetTrace identify_constraints(const ArrivalPattern& pattern) {
  ConstraintSetTrace trace;
  std::vector<PacketId> active;  // ascending; max is back()
  PacketId next_id = 1;
  for (Slot t = 1; t <= pattern.horizon(); ++t) {
    for (Count k = 0; k < pattern.a1(t); ++k) {
      active.push_back(next_id++);
      trace.arrival_slot.push_back(t);
      trace.removal_slot.emplace_back();
    }
    std::vector<PacketId> removed;
    for (Count q2 = pattern.a2(t); q2 > 0 && !active.empty(); --q2) {
      PacketId victim = active.back();
      active.pop_back();
      trace.removal_slot[static_cast<std::size_t>(victim - 1)] = t;
      removed.push_back(victim);
    }
    trace.sets.push_back(active);
    trace.removed.push_back(std::move(removed));
  }
  return trace;
}

ConstraintIntervals extract_intervals(const ConstraintSetTrace& trace,
                                      const ArrivalPattern& pattern, const CostModel& cm) {
  ConstraintIntervals out;
  Slot sentinel = drain_end(pattern, cm);
  for (std::size_t i = 0; i < trace.arrival_slot.size(); ++i) {
    WaitingInterval w;
    w.packet = static_cast<PacketId>(i + 1);
    w.alpha = trace.arrival_slot[i];
    if (trace.removal_slot[i]) {
      w.beta = *trace.removal_slot[i] - 1;
    } else {
      w.beta = std::max(sentinel, w.alpha);
      w.open_ended = true;
    }
    out.intervals.push_back(w);
  }
  return out;
}

Rational opt_two_sided_closed_form(const ConstraintIntervals& intervals, const CostModel& cm) {
  const Rational c = cm.exact_c();
  Rational total = 0;
  for (const auto& w : intervals.intervals) {
    Rational len = w.length();
    total += len < c ? len : c;
  }
  return total;
}

Rational opt_two_sided(const ArrivalPattern& pattern, const CostModel& cm) {
  return opt_two_sided_closed_form(
      extract_intervals(identify_constraints(pattern), pattern, cm), cm);
}

namespace {

void require_one_sided(const ArrivalPattern& pattern) {
  if (!pattern.is_one_sided())
    throw RejectedInput("one-sided optimum needs every Q1 packet to arrive in slot 1");
}

Count min_uncoded(const ArrivalPattern& pattern) {
  return std::max<Count>(0, pattern.n1() - pattern.n2());
}

}  // namespace

double one_sided_objective(const ArrivalPattern& pattern, const CostModel& cm, double x) {
  require_one_sided(pattern);
  const double n1 = static_cast<double>(pattern.n1());
  double cost = cm.c() * x;
  Slot end = drain_end(pattern, cm);
  for (Slot t = 1; t <= end; ++t)
    cost += std::max(n1 - static_cast<double>(pattern.n2_through(t)) - x, 0.0);
  return cost;
}

Rational one_sided_objective_exact(const ArrivalPattern& pattern, const CostModel& cm,
                                   Count x) {
  require_one_sided(pattern);
  Rational cost = cm.exact_c() * x;
  Slot end = drain_end(pattern, cm);
  for (Slot t = 1; t <= end; ++t)
    cost += std::max<Count>(pattern.n1() - pattern.n2_through(t) - x, 0);
  return cost;
}

OneSidedOptimum opt_one_sided(const ArrivalPattern& pattern, const CostModel& cm) {
  require_one_sided(pattern);
  OneSidedOptimum best{0, 0};
  bool first = true;
  for (Count x = min_uncoded(pattern); x <= pattern.n1(); ++x) {
    Rational cost = one_sided_objective_exact(pattern, cm, x);
    if (first || cost < best.cost) {
      best = {cost, x};
      first = false;
    }
  }
  return best;
}

double one_sided_lp_continuous_min(const ArrivalPattern& pattern, const CostModel& cm) {
  require_one_sided(pattern);
  double lo = static_cast<double>(min_uncoded(pattern));
  double hi = static_cast<double>(pattern.n1());
  auto f = [&](double x) { return one_sided_objective(pattern, cm, x); };
  for (int iter = 0; iter < 200 && hi - lo > 1e-13; ++iter) {
    double m1 = lo + (hi - lo) / 3.0;
    double m2 = hi - (hi - lo) / 3.0;
    if (f(m1) <= f(m2))
      hi = m2;
    else
      lo = m1;
  }
  return std::min({f(lo), f(hi), f(0.5 * (lo + hi))});
}

Rational opt_two_sided_bruteforce(const ArrivalPattern& pattern, const CostModel& cm) {
  const auto s1 = pattern.q1_arrival_slots();
  const auto s2 = pattern.q2_arrival_slots();
  if (static_cast<Count>(s1.size()) > kBruteForceMaxPackets ||
      static_cast<Count>(s2.size()) > kBruteForceMaxPackets)
    throw RejectedInput("brute-force matching is limited to 8 packets per queue");
  const Rational c = cm.exact_c();
  const std::size_t masks = std::size_t{1} << s2.size();
  std::vector<std::optional<Rational>> memo((s1.size() + 1) * masks);

  // best(i, used): cheapest handling of Q1 packets i.. given used Q2 packets.
  auto best = [&](auto&& self, std::size_t i, std::size_t used) -> Rational {
    if (i == s1.size()) return 0;
    auto& slot = memo[i * masks + used];
    if (slot) return *slot;
    Rational value = c + self(self, i + 1, used);
    for (std::size_t j = 0; j < s2.size(); ++j) {
      if ((used >> j) & 1U) continue;
      if (s2[j] < s1[i]) continue;
      Rational wait = s2[j] - s1[i];
      Rational cost = (wait < c ? wait : c) + self(self, i + 1, used | (std::size_t{1} << j));
      if (cost < value) value = cost;
    }
    slot = value;
    return value;
  };
  return best(best, 0, 0);
}

namespace {

// Minimal sparse LP representation: min c'v s.t. A v >= b, v >= 0.
struct Term {
  std::string var;
  double coef;
};
struct Row {
  std::string name;
  std::vector<Term> terms;
  double rhs;
};
struct Column {
  std::string name;
  double cost;
};
struct Lp {
  std::vector<Column> columns;
  std::vector<Row> rows;
};

void write_terms(std::ostream& out, const std::vector<Term>& terms) {
  if (terms.empty()) {
    out << " 0";
    return;
  }
  for (std::size_t k = 0; k < terms.size(); ++k) {
    if (k > 0 && k % 8 == 0) out << "\n   ";
    const auto& t = terms[k];
    out << (k == 0 ? (t.coef < 0 ? " - " : " ") : (t.coef < 0 ? " - " : " + "));
    double mag = t.coef < 0 ? -t.coef : t.coef;
    if (mag != 1.0) out << format_number(mag) << ' ';
    out << t.var;
  }
}

std::string write_primal(const Lp& lp, const std::string& title) {
  std::ostringstream out;
  out << "\\ " << title << "\nMinimize\n obj:";
  std::vector<Term> obj;
  for (const auto& col : lp.columns) obj.push_back({col.name, col.cost});
  write_terms(out, obj);
  out << "\nSubject To\n";
  for (const auto& row : lp.rows) {
    out << ' ' << row.name << ':';
    write_terms(out, row.terms);
    out << " >= " << format_number(row.rhs) << '\n';
  }
  out << "End\n";
  return out.str();
}

// max b'w s.t. A'w <= c, w >= 0. Columns with a single unit entry become
// upper bounds on the matching dual variable.
std::string write_dual(const Lp& lp, const std::string& title) {
  std::map<std::string, std::vector<Term>> by_column;
  std::map<std::string, std::string> dual_name;
  for (const auto& row : lp.rows) {
    dual_name[row.name] = "w" + row.name.substr(1);
    for (const auto& t : row.terms) by_column[t.var].push_back({dual_name[row.name], t.coef});
  }
  std::ostringstream out;
  out << "\\ " << title << "\nMaximize\n obj:";
  std::vector<Term> obj;
  for (const auto& row : lp.rows) obj.push_back({dual_name[row.name], row.rhs});
  write_terms(out, obj);
  out << "\nSubject To\n";
  std::vector<std::pair<std::string, double>> bounds;
  for (const auto& col : lp.columns) {
    auto it = by_column.find(col.name);
    if (it == by_column.end()) continue;
    const auto& entries = it->second;
    if (entries.size() == 1 && entries.front().coef == 1.0) {
      bounds.emplace_back(entries.front().var, col.cost);
      continue;
    }
    out << " d" << col.name << ':';
    write_terms(out, entries);
    out << " <= " << format_number(col.cost) << '\n';
  }
  if (!bounds.empty()) {
    out << "Bounds\n";
    for (const auto& [var, ub] : bounds) out << " 0 <= " << var << " <= " << format_number(ub) << '\n';
  }
  out << "End\n";
  return out.str();
}

Lp one_sided_lp(const ArrivalPattern& pattern, const CostModel& cm) {
  Lp lp;
  Slot end = drain_end(pattern, cm);
  const bool single_x = pattern.is_one_sided();
  std::vector<Slot> arrivals = pattern.q1_arrival_slots();
  if (single_x) {
    if (pattern.n1() > 0) lp.columns.push_back({"x", cm.c()});
  } else {
    for (std::size_t i = 0; i < arrivals.size(); ++i)
      lp.columns.push_back({"x" + std::to_string(i + 1), cm.c()});
  }
  for (Slot t = 1; t <= end; ++t) {
    Count rhs = pattern.n1_through(t) - pattern.n2_through(t);
    if (rhs <= 0) continue;
    std::string z = "z" + std::to_string(t);
    lp.columns.push_back({z, 1.0});
    Row row{"c" + std::to_string(t), {}, static_cast<double>(rhs)};
    if (single_x) {
      row.terms.push_back({"x", 1.0});
    } else {
      for (std::size_t i = 0; i < arrivals.size() && arrivals[i] <= t; ++i)
        row.terms.push_back({"x" + std::to_string(i + 1), 1.0});
    }
    row.terms.push_back({z, 1.0});
    lp.rows.push_back(std::move(row));
  }
  return lp;
}

Lp two_sided_lp(const ArrivalPattern& pattern, const CostModel& cm) {
  Lp lp;
  auto trace = identify_constraints(pattern);
  Slot end = drain_end(pattern, cm);
  for (std::size_t i = 0; i < trace.arrival_slot.size(); ++i)
    lp.columns.push_back({"x" + std::to_string(i + 1), cm.c()});
  for (Slot t = 1; t <= end; ++t) {
    for (PacketId i : trace.at(t)) {
      std::string suffix = std::to_string(i) + "_" + std::to_string(t);
      lp.columns.push_back({"z" + suffix, 1.0});
      lp.rows.push_back({"c" + suffix, {{"x" + std::to_string(i), 1.0}, {"z" + suffix, 1.0}}, 1.0});
    }
  }
  return lp;
}

}  // namespace

std::string lp_export(const ArrivalPattern& pattern, const CostModel& cm, LpKind which) {
  switch (which) {
    case LpKind::OneSidedPrimal:
      return write_primal(one_sided_lp(pattern, cm), "aggregate primal: x + z(t) >= n1(t) - n2(t)");
    case LpKind::OneSidedDual:
      return write_dual(one_sided_lp(pattern, cm), "dual of the aggregate primal");
    case LpKind::TwoSidedPrimal:
      return write_primal(two_sided_lp(pattern, cm), "per-packet primal: x_i + z_i(t) >= 1, i in I(t)");
    case LpKind::TwoSidedDual:
      return write_dual(two_sided_lp(pattern, cm), "dual of the per-packet primal");
  }
  throw RejectedInput("unknown LP kind");
}

void write_intervals_csv(std::ostream& out, const ConstraintIntervals& intervals) {
  out << "packet,alpha,beta\n";
  for (const auto& w : intervals.intervals)
    out << w.packet << ',' << w.alpha << ',' << w.beta << '\n';
}

}  // namespace ncsched
