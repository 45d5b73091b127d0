#include "ncsched/relay_core.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "ncsched/io.hpp"

namespace ncsched {

namespace {

std::vector<Count> prefix_sums(const std::vector<Count>& v) {
  std::vector<Count> out(v.size());
  Count acc = 0;
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = acc += v[i];
  return out;
}

Count at_or_zero(const std::vector<Count>& v, Slot t) {
  if (t < 1 || t > static_cast<Slot>(v.size())) return 0;
  return v[static_cast<std::size_t>(t - 1)];
}

Count cumulative(const std::vector<Count>& cum, Slot t) {
  if (t < 1 || cum.empty()) return 0;
  if (t > static_cast<Slot>(cum.size())) return cum.back();
  return cum[static_cast<std::size_t>(t - 1)];
}

std::vector<Slot> expand(const std::vector<Count>& a) {
  std::vector<Slot> slots;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (Count k = 0; k < a[i]; ++k) slots.push_back(static_cast<Slot>(i + 1));
  return slots;
}

}  // namespace

ArrivalPattern::ArrivalPattern(std::vector<Count> a1, std::vector<Count> a2)
    : a1_(std::move(a1)), a2_(std::move(a2)) {
  if (a1_.size() != a2_.size())
    throw RejectedInput("arrival series must have equal length");
  if (a1_.empty()) throw RejectedInput("arrival pattern horizon must be at least one slot");
  auto negative = [](Count c) { return c < 0; };
  if (std::any_of(a1_.begin(), a1_.end(), negative) ||
      std::any_of(a2_.begin(), a2_.end(), negative))
    throw RejectedInput("arrival counts must be non-negative");
  cum1_ = prefix_sums(a1_);
  cum2_ = prefix_sums(a2_);
}

ArrivalPattern ArrivalPattern::idle(Slot horizon) {
  if (horizon < 1) throw RejectedInput("arrival pattern horizon must be at least one slot");
  auto n = static_cast<std::size_t>(horizon);
  return ArrivalPattern(std::vector<Count>(n, 0), std::vector<Count>(n, 0));
}

ArrivalPattern ArrivalPattern::from_slots(const std::vector<Slot>& q1_slots,
                                          const std::vector<Slot>& q2_slots, Slot horizon) {
  Slot last = std::max<Slot>(horizon, 1);
  for (Slot s : q1_slots) last = std::max(last, s);
  for (Slot s : q2_slots) last = std::max(last, s);
  std::vector<Count> a1(static_cast<std::size_t>(last), 0), a2(a1.size(), 0);
  for (Slot s : q1_slots) {
    if (s < 1) throw RejectedInput("arrival slots are 1-based");
    ++a1[static_cast<std::size_t>(s - 1)];
  }
  for (Slot s : q2_slots) {
    if (s < 1) throw RejectedInput("arrival slots are 1-based");
    ++a2[static_cast<std::size_t>(s - 1)];
  }
  return ArrivalPattern(std::move(a1), std::move(a2));
}

Count ArrivalPattern::a1(Slot t) const { return at_or_zero(a1_, t); }
Count ArrivalPattern::a2(Slot t) const { return at_or_zero(a2_, t); }
Count ArrivalPattern::n1_through(Slot t) const { return cumulative(cum1_, t); }
Count ArrivalPattern::n2_through(Slot t) const { return cumulative(cum2_, t); }

Slot ArrivalPattern::last_arrival_slot() const {
  for (Slot t = horizon(); t >= 1; --t)
    if (a1(t) > 0 || a2(t) > 0) return t;
  return 0;
}

bool ArrivalPattern::is_one_sided() const { return n1_through(1) == n1(); }

std::vector<Slot> ArrivalPattern::q1_arrival_slots() const { return expand(a1_); }
std::vector<Slot> ArrivalPattern::q2_arrival_slots() const { return expand(a2_); }

Decision Decision::greedy(const RelayQueues& q, Count k) {
  Decision d;
  k = std::max<Count>(k, 0);
  d.coded = std::min({q.q1, q.q2, k});
  k -= d.coded;
  d.uncoded_q1 = std::min(q.q1 - d.coded, k);
  k -= d.uncoded_q1;
  d.uncoded_q2 = std::min(q.q2 - d.coded, k);
  return d;
}

void validate(const Decision& d, const RelayQueues& q) {
  if (d.coded < 0 || d.uncoded_q1 < 0 || d.uncoded_q2 < 0)
    throw RejectedInput("decision counts must be non-negative");
  if (d.coded > std::min(q.q1, q.q2))
    throw RejectedInput("coded packets exceed the shorter queue");
  if (d.coded + d.uncoded_q1 > q.q1 || d.coded + d.uncoded_q2 > q.q2)
    throw RejectedInput("decision serves more packets than queued");
}

CostModel::CostModel(double c) : c_(c) {
  if (!(c > 1.0) || !std::isfinite(c))
    throw RejectedInput("transmission cost must be a finite value greater than one");
}

CostModel CostModel::non_consistent(double c1, double c2) {
  CostModel cm(effective_cost(c1, c2));
  cm.split_ = std::make_pair(c1, c2);
  return cm;
}

Count CostModel::floor_c() const { return static_cast<Count>(std::floor(c_)); }
Count CostModel::ceil_c() const { return static_cast<Count>(std::ceil(c_)); }

double effective_cost(double c1, double c2) {
  if (!(c2 > 0.0)) throw RejectedInput("uncoded cost must be positive");
  if (c1 < c2) throw RejectedInput("coded cost must be at least the uncoded cost");
  double c = 2.0 * c2 - c1;
  if (c < 0.0) throw RejectedInput("coding never saves cost when 2*c2 - c1 < 0");
  return c;
}

SlotCost slot_cost(const RelayQueues& queued, const Decision& d, const CostModel& cm) {
  Count left1 = std::max<Count>(queued.q1 - d.coded - d.uncoded_q1, 0);
  Count left2 = std::max<Count>(queued.q2 - d.coded - d.uncoded_q2, 0);
  return {cm.c() * static_cast<double>(d.total()), static_cast<double>(left1 + left2)};
}

RelayQueues queue_step(const RelayQueues& q, const Decision& d, SlotArrivals next) {
  validate(d, q);
  if (next.a1 < 0 || next.a2 < 0) throw RejectedInput("arrival counts must be non-negative");
  return {q.q1 - d.coded - d.uncoded_q1 + next.a1, q.q2 - d.coded - d.uncoded_q2 + next.a2};
}

void CostLedger::add(const SlotCost& s, const Decision& d, bool trace) {
  tx_cost += s.tx;
  holding_cost += s.hold;
  coded += d.coded;
  uncoded_q1 += d.uncoded_q1;
  uncoded_q2 += d.uncoded_q2;
  if (trace) per_slot.push_back(s);
}

Slot drain_end(const ArrivalPattern& pattern, const CostModel& cm) {
  return pattern.horizon() + cm.floor_c() + 1;
}

RunResult run_policy(const ArrivalPattern& pattern, SchedulingPolicy& policy,
                     const CostModel& cm, const RunOptions& options) {
  RunResult result;
  Slot end = options.drain ? drain_end(pattern, cm) : pattern.horizon();
  RelayQueues q{pattern.a1(1), pattern.a2(1)};
  for (Slot t = 1; t <= end; ++t) {
    Decision d = policy.decide(q, pattern.at(t), t);
    validate(d, q);
    result.ledger.add(slot_cost(q, d, cm), d, options.trace);
    if (options.trace) result.decisions.push_back(d);
    q = queue_step(q, d, pattern.at(t + 1));
  }
  // queue_step added A(end+1), which is zero past the horizon.
  result.final_queues = q;
  result.slots = end;
  return result;
}

void write_pattern_csv(std::ostream& out, const ArrivalPattern& pattern) {
  out << "slot,a1,a2\n";
  for (Slot t = 1; t <= pattern.horizon(); ++t)
    out << t << ',' << pattern.a1(t) << ',' << pattern.a2(t) << '\n';
}

ArrivalPattern read_pattern_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw RejectedInput("pattern CSV is empty");
  auto header = split_csv_line(line);
  if (header != std::vector<std::string>{"slot", "a1", "a2"})
    throw RejectedInput("pattern CSV header must be slot,a1,a2");
  std::vector<Count> a1, a2;
  Slot expected = 1;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto cells = split_csv_line(line);
    if (cells.size() != 3) throw RejectedInput("pattern CSV rows need three columns: " + line);
    try {
      if (std::stoll(cells[0]) != expected)
        throw RejectedInput("pattern CSV slots must be consecutive from 1");
      a1.push_back(std::stoll(cells[1]));
      a2.push_back(std::stoll(cells[2]));
    } catch (const std::logic_error& e) {
      if (dynamic_cast<const RejectedInput*>(&e)) throw;
      throw RejectedInput("pattern CSV has a non-integer cell: " + line);
    }
    ++expected;
  }
  return ArrivalPattern(std::move(a1), std::move(a2));
}

void write_ledger_csv(std::ostream& out, const CostLedger& ledger) {
  out << "slot,tx_cost,holding_cost\n";
  Slot t = 1;
  for (const auto& s : ledger.per_slot)
    out << t++ << ',' << format_number(s.tx) << ',' << format_number(s.hold) << '\n';
}

}  // namespace ncsched
