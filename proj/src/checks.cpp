#include "ncsched/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "ncsched/baselines.hpp"
#include "ncsched/netsim.hpp"
#include "ncsched/offline_oracle.hpp"
#include "ncsched/primal_dual.hpp"
#include "ncsched/randomized_scheduler.hpp"

namespace ncsched {

ArrivalPattern random_two_sided(std::mt19937_64& rng, Count max_per_side, Slot max_horizon) {
  std::uniform_int_distribution<Slot> horizon_d(1, max_horizon);
  std::uniform_int_distribution<Count> count_d(0, max_per_side);
  Slot h = horizon_d(rng);
  std::uniform_int_distribution<Slot> slot_d(1, h);
  std::vector<Slot> s1(static_cast<std::size_t>(count_d(rng)));
  std::vector<Slot> s2(static_cast<std::size_t>(count_d(rng)));
  for (auto& s : s1) s = slot_d(rng);
  for (auto& s : s2) s = slot_d(rng);
  return ArrivalPattern::from_slots(s1, s2, h);
}

ArrivalPattern random_one_sided(std::mt19937_64& rng, Count max_q1, Count max_q2,
                                Slot max_horizon) {
  std::uniform_int_distribution<Slot> horizon_d(1, max_horizon);
  Slot h = horizon_d(rng);
  std::uniform_int_distribution<Slot> slot_d(1, h);
  Count n1 = std::uniform_int_distribution<Count>(0, max_q1)(rng);
  std::vector<Slot> s1(static_cast<std::size_t>(n1), 1);
  std::vector<Slot> s2(static_cast<std::size_t>(std::uniform_int_distribution<Count>(0, max_q2)(rng)));
  for (auto& s : s2) s = slot_d(rng);
  return ArrivalPattern::from_slots(s1, s2, h);
}

std::string describe(const ArrivalPattern& p) {
  std::ostringstream out;
  out << "a1=[";
  for (Slot t = 1; t <= p.horizon(); ++t) out << (t > 1 ? "," : "") << p.a1(t);
  out << "] a2=[";
  for (Slot t = 1; t <= p.horizon(); ++t) out << (t > 1 ? "," : "") << p.a2(t);
  out << "]";
  return out.str();
}

namespace {

const std::vector<double> kCosts{1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 7.25, 10.0};

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void fail(CheckResult& r, const std::string& what) {
  if (r.violations++ == 0) r.detail = what;
}

double pick_cost(std::mt19937_64& rng, const std::vector<double>& costs) {
  return costs[std::uniform_int_distribution<std::size_t>(0, costs.size() - 1)(rng)];
}

template <typename Pd>
void run_two_sided(Pd& pd, const ArrivalPattern& p, const CostModel& cm) {
  for (Slot t = 1; t <= drain_end(p, cm); ++t) pd.step(t, p.at(t));
}

template <typename Pd>
void run_one_sided(Pd& pd, const ArrivalPattern& p, const CostModel& cm) {
  for (Slot t = 1; t <= drain_end(p, cm); ++t) pd.step(t, p.n2_through(t));
}

std::string with_cost(const ArrivalPattern& p, double c) {
  std::ostringstream out;
  out << describe(p) << " C=" << c;
  return out.str();
}

}  // namespace

CheckResult check_example_two_trajectory() {
  Timer timer;
  CheckResult r{"two packets at slots 1 and 3, C=2: x trajectory", 1};
  CostModel cm(2.0);
  TwoSidedPrimalDual<Rational> pd(cm, true);
  auto p = ArrivalPattern::from_slots({1, 3}, {}, 4);
  if (!pd.theta().exact || *pd.theta().exact != Rational(5, 4)) fail(r, "theta != 5/4");
  struct Expect {
    PacketId packet;
    Rational x;
  };
  const Expect expected[] = {{1, Rational(2, 5)}, {1, 1}, {2, Rational(2, 5)}, {2, 1}};
  for (Slot t = 1; t <= 4; ++t) {
    std::size_t before = pd.trace().size();
    pd.step(t, p.at(t));
    std::vector<PdTraceEntry<Rational>> updated;
    for (std::size_t k = before; k < pd.trace().size(); ++k)
      if (pd.trace()[k].w == 1) updated.push_back(pd.trace()[k]);
    const Expect& e = expected[t - 1];
    if (updated.size() != 1 || updated[0].packet != e.packet || updated[0].x != e.x) {
      std::ostringstream out;
      out << "slot " << t << ": expected x" << e.packet << " -> " << e.x << ", got "
          << updated.size() << " updates";
      if (!updated.empty()) out << " (x" << updated[0].packet << " -> " << updated[0].x << ")";
      fail(r, out.str());
    }
  }
  for (Slot t = 5; t <= 8; ++t)
    if (pd.step(t, p.at(t)).updated != 0) fail(r, "update after both packets froze");
  if (pd.primal() != Rational(36, 5) || pd.dual() != 4)
    fail(r, "objectives " + pd.primal().str() + " / " + pd.dual().str() + ", expected 36/5 / 4");
  r.seconds = timer.seconds();
  return r;
}

CheckResult check_example_three_optimum() {
  Timer timer;
  CheckResult r{"slots 1,2 vs slot 3, C=4: offline optimum", 1};
  CostModel cm(4.0);
  auto p = ArrivalPattern::from_slots({1, 2}, {3});
  auto trace = identify_constraints(p);
  using Set = std::vector<PacketId>;
  if (trace.at(1) != Set{1} || trace.at(2) != Set{1, 2} || trace.at(3) != Set{1})
    fail(r, "constraint sets differ from {1}, {1,2}, {1}");
  auto iv = extract_intervals(trace, p, cm);
  if (iv.intervals.size() != 2 || !iv.intervals[0].open_ended || iv.intervals[1].alpha != 2 ||
      iv.intervals[1].beta != 2)
    fail(r, "intervals differ from [1, end] and [2, 2]");
  Rational closed = opt_two_sided_closed_form(iv, cm);
  Rational brute = opt_two_sided_bruteforce(p, cm);
  if (closed != 5) fail(r, "closed form " + closed.str() + " != 5");
  if (brute != 5) fail(r, "brute force " + brute.str() + " != 5");
  r.seconds = timer.seconds();
  return r;
}

CheckResult check_example_one_lp() {
  Timer timer;
  CheckResult r{"slots 1 and 3, C=2: aggregate LP rows", 1};
  CostModel cm(2.0);
  auto p = ArrivalPattern::from_slots({1, 3}, {}, 3);
  std::string lp = lp_export(p, cm, LpKind::OneSidedPrimal);
  for (const char* row : {" c1: x1 + z1 >= 1", " c2: x1 + z2 >= 1", " c3: x1 + x2 + z3 >= 2",
                          " c4: x1 + x2 + z4 >= 2"})
    if (lp.find(row) == std::string::npos) fail(r, std::string("missing row") + row);
  r.seconds = timer.seconds();
  return r;
}

CheckResult check_oracle_agreement(Count instances, std::uint64_t seed) {
  Timer timer;
  CheckResult r{"closed-form optimum equals exhaustive matching"};
  std::mt19937_64 rng(seed);
  const std::vector<double> costs{2.0, 3.0, 5.0, 8.0};
  for (Count n = 0; n < instances; ++n) {
    auto p = random_two_sided(rng, 6, 20);
    CostModel cm(pick_cost(rng, costs));
    Rational closed = opt_two_sided(p, cm), brute = opt_two_sided_bruteforce(p, cm);
    ++r.instances;
    if (closed != brute)
      fail(r, with_cost(p, cm.c()) + ": closed " + closed.str() + " brute " + brute.str());
  }
  r.seconds = timer.seconds();
  return r;
}

CheckResult check_one_sided_integrality(Count instances, std::uint64_t seed) {
  Timer timer;
  CheckResult r{"continuous one-sided LP minimum equals integer minimum"};
  std::mt19937_64 rng(seed);
  for (Count n = 0; n < instances; ++n) {
    auto p = random_one_sided(rng, 10, 12, 25);
    CostModel cm(pick_cost(rng, kCosts));
    double cont = one_sided_lp_continuous_min(p, cm);
    double integer = to_double(opt_one_sided(p, cm).cost);
    ++r.instances;
    if (std::abs(cont - integer) > 1e-9) {
      std::ostringstream out;
      out << with_cost(p, cm.c()) << ": continuous " << cont << " integer " << integer;
      fail(r, out.str());
    }
  }
  r.seconds = timer.seconds();
  return r;
}

CheckResult check_feasibility(Count instances, std::uint64_t seed) {
  Timer timer;
  CheckResult r{"primal and dual feasibility of the fractional solutions"};
  std::mt19937_64 rng(seed);
  for (Count n = 0; n < instances; ++n) {
    CostModel cm(pick_cost(rng, kCosts));
    const Rational c = cm.exact_c();
    {
      auto p = random_one_sided(rng, cm.floor_c(), 8, 20);
      OneSidedPrimalDual<Rational> pd(p.n1(), cm, true);
      run_one_sided(pd, p, cm);
      const Rational x = pd.total_x();
      for (Slot t = 1; t <= static_cast<Slot>(pd.slot_z().size()); ++t) {
        Rational need = p.n1() - p.n2_through(t);
        if (x + pd.slot_z()[static_cast<std::size_t>(t - 1)] < need)
          fail(r, "one-sided primal row " + std::to_string(t) + " violated: " + with_cost(p, cm.c()));
      }
      if (Rational(pd.w_sum()) > c) fail(r, "one-sided dual budget exceeded: " + with_cost(p, cm.c()));
      for (int w : pd.slot_w())
        if (w != 0 && w != 1) fail(r, "dual variable outside [0,1]");
      ++r.instances;
    }
    {
      auto p = random_two_sided(rng, 6, 20);
      TwoSidedPrimalDual<Rational> pd(cm, true);
      run_two_sided(pd, p, cm);
      auto trace = identify_constraints(p);
      for (const auto& e : pd.trace()) {
        const auto& pk = pd.packets()[static_cast<std::size_t>(e.packet - 1)];
        if (pk.x + e.z < 1)
          fail(r, "two-sided primal row x" + std::to_string(e.packet) + " slot " +
                      std::to_string(e.slot) + " violated: " + with_cost(p, cm.c()));
        if (e.w != 0 && e.w != 1) fail(r, "dual variable outside [0,1]");
      }
      // Every (i, t) with i in I(t) must appear in the trace.
      std::size_t rows = 0;
      for (Slot t = 1; t <= drain_end(p, cm); ++t) rows += trace.at(t).size();
      if (rows != pd.trace().size())
        fail(r, "constraint rows and traced rows differ: " + with_cost(p, cm.c()));
      for (const auto& pk : pd.packets())
        if (Rational(pk.updates) > c) fail(r, "per-packet dual budget exceeded: " + with_cost(p, cm.c()));
      ++r.instances;
    }
  }
  r.seconds = timer.seconds();
  return r;
}

CheckResult check_fractional_ratio(Count instances, std::uint64_t seed) {
  Timer timer;
  CheckResult r{"fractional primal within (1 + 1/theta) of the optimum"};
  std::mt19937_64 rng(seed);
  for (Count n = 0; n < instances; ++n) {
    CostModel cm(pick_cost(rng, kCosts));
    const Rational bound = competitive_bound_exact(cm.c());
    {
      auto p = random_one_sided(rng, cm.floor_c(), 8, 20);
      OneSidedPrimalDual<Rational> pd(p.n1(), cm);
      run_one_sided(pd, p, cm);
      Rational opt = opt_one_sided(p, cm).cost;
      if (pd.primal() > bound * opt)
        fail(r, "one-sided primal " + pd.primal().str() + " > bound * " + opt.str() + ": " +
                    with_cost(p, cm.c()));
      if (pd.dual() > opt) fail(r, "one-sided dual above the optimum: " + with_cost(p, cm.c()));
      if (pd.primal() != bound * pd.dual())
        fail(r, "one-sided primal != (1 + 1/theta) dual: " + with_cost(p, cm.c()));
      ++r.instances;
    }
    {
      auto p = random_two_sided(rng, 6, 20);
      TwoSidedPrimalDual<Rational> pd(cm);
      Rational opt = opt_two_sided(p, cm);
      for (Slot t = 1; t <= drain_end(p, cm); ++t) {
        auto su = pd.step(t, p.at(t));
        if (su.delta_primal != bound * su.delta_dual)
          fail(r, "slot increments break dP = (1 + 1/theta) dD: " + with_cost(p, cm.c()));
      }
      if (pd.primal() > bound * opt)
        fail(r, "two-sided primal " + pd.primal().str() + " > bound * " + opt.str() + ": " +
                    with_cost(p, cm.c()));
      ++r.instances;
    }
  }
  r.seconds = timer.seconds();
  return r;
}

CheckResult check_bound_constants() {
  Timer timer;
  CheckResult r{"bound constants at C = 2, 10 and for large C", 1};
  if (competitive_bound_exact(2.0) != Rational(9, 5)) fail(r, "bound at C=2 is not 9/5");
  double b10 = competitive_bound(10.0);
  if (std::abs(b10 - 1.6274539488) > 1e-9) fail(r, "bound at C=10 is " + std::to_string(b10));
  const double limit = std::exp(1.0) / (std::exp(1.0) - 1.0);
  double prev = competitive_bound(10.0);
  for (double c : {100.0, 1000.0, 1e5, 1e7}) {
    double b = competitive_bound(c);
    if (!(b < prev && b > limit)) fail(r, "bound not decreasing towards e/(e-1) at C=" + std::to_string(c));
    prev = b;
  }
  if (std::abs(prev - limit) > 1e-6) fail(r, "bound at C=1e7 is not within 1e-6 of e/(e-1)");
  r.seconds = timer.seconds();
  return r;
}

CheckResult check_expected_ratio(Count draws, Count two_sided_instances, std::uint64_t seed) {
  Timer timer;
  CheckResult r{"expected cost of the randomized schedulers within (1 + 1/theta) + 0.02"};
  constexpr double kTolerance = 0.02;
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (double c : {2.0, 3.5, 5.0, 10.0}) {
    CostModel cm(c);
    const double bound = competitive_bound(c);
    const Slot last = static_cast<Slot>(std::ceil(3 * c));
    for (Slot day = 1; day <= last; ++day) {
      auto p = ski_rental_adapter(day);
      double opt = to_double(opt_one_sided(p, cm).cost);
      auto er = expected_ratio(p, [&](double u) { return std::make_unique<OneSidedScheduler>(cm, u); },
                               cm, opt, draws, rng());
      ++r.instances;
      worst = std::max(worst, er.ratio);
      if (er.infinite || er.ratio > bound + kTolerance) {
        std::ostringstream out;
        out << "ski rental T=" << day << " C=" << c << ": ratio " << er.ratio << " bound " << bound;
        fail(r, out.str());
      }
    }
  }
  for (Count n = 0; n < two_sided_instances; ++n) {
    CostModel cm(pick_cost(rng, {2.0, 3.0, 5.0, 8.0}));
    const double bound = competitive_bound(cm.c());
    auto p = random_two_sided(rng, 6, 20);
    double opt = to_double(opt_two_sided(p, cm));
    auto er = expected_ratio(
        p, [&](double u) { return std::make_unique<TwoSidedScheduler>(cm, u, TwoSidedMode::Unconstrained); },
        cm, opt, draws, rng());
    ++r.instances;
    worst = std::max(worst, er.ratio);
    if (er.infinite || er.ratio > bound + kTolerance) {
      std::ostringstream out;
      out << with_cost(p, cm.c()) << ": ratio " << er.ratio << " bound " << bound;
      fail(r, out.str());
    }
  }
  if (r.violations == 0) r.detail = "worst mean ratio " + std::to_string(worst);
  r.seconds = timer.seconds();
  return r;
}

CheckResult check_transmission_caps(Count instances, std::uint64_t seed) {
  Timer timer;
  CheckResult r{"uncoded per slot <= 3 one-sided, transmissions per slot <= 1 constrained"};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (Count n = 0; n < instances; ++n) {
    CostModel cm(pick_cost(rng, kCosts));
    {
      auto p = random_one_sided(rng, cm.floor_c(), 8, 20);
      OneSidedScheduler s(cm, unit(rng));
      RunResult run = run_policy(p, s, cm, {true, true});
      if (s.stats().max_crossings_per_slot > 3)
        fail(r, "one-sided slot with " + std::to_string(s.stats().max_crossings_per_slot) +
                    " uncoded: " + with_cost(p, cm.c()));
      for (const auto& d : run.decisions)
        if (d.uncoded_q1 > 3) fail(r, "one-sided decision with more than 3 uncoded");
      ++r.instances;
    }
    {
      auto p = spread_arrivals(random_two_sided(rng, 6, 20));
      TwoSidedScheduler s(cm, unit(rng), TwoSidedMode::Constrained);
      run_policy(p, s, cm, {true, false});
      if (s.stats().max_transmissions_per_slot > 1)
        fail(r, "constrained slot with several transmissions: " + with_cost(p, cm.c()));
      TwoSidedPrimalDual<Rational> pd(cm);
      for (Slot t = 1; t <= drain_end(p, cm); ++t)
        if (pd.step_constrained(t, p.at(t)).delta_x > 1)
          fail(r, "constrained slot with uncoded mass above one: " + with_cost(p, cm.c()));
      ++r.instances;
    }
    {
      TrafficSpec spec{unit(rng), unit(rng), 0.0, 400};
      auto gen = replication_rng(seed, static_cast<std::uint64_t>(n), 7);
      auto p = gen_bernoulli_truncated_gaussian(spec, gen);
      ProposedPolicy s(cm, unit(rng));
      run_policy(p, s, cm, {true, false});
      if (s.stats().max_transmissions_per_slot > 1)
        fail(r, "proposed policy sent several packets in a slot");
      ++r.instances;
    }
  }
  r.seconds = timer.seconds();
  return r;
}

CheckResult check_freeze(Count instances, std::uint64_t seed) {
  Timer timer;
  CheckResult r{"x_i follows ((1+1/C)^j - 1)/theta and freezes after floor(C) updates"};
  std::mt19937_64 rng(seed);
  for (Count n = 0; n < instances; ++n) {
    CostModel cm(pick_cost(rng, kCosts));
    const Rational c = cm.exact_c();
    const Rational theta = *compute_theta(cm).exact;
    // closed[j] = ((1+1/C)^j - 1)/theta.
    std::vector<Rational> closed{0};
    Rational power = 1;
    for (Count j = 1; j <= cm.floor_c(); ++j) {
      power *= 1 + 1 / c;
      closed.push_back((power - 1) / theta);
    }
    auto p = random_two_sided(rng, 6, 20);
    TwoSidedPrimalDual<Rational> pd(cm, true);
    run_two_sided(pd, p, cm);
    std::vector<Count> seen(pd.packets().size(), 0);
    std::vector<Rational> last(pd.packets().size(), Rational(0));
    for (const auto& e : pd.trace()) {
      auto k = static_cast<std::size_t>(e.packet - 1);
      if (e.w == 1) ++seen[k];
      if (seen[k] > cm.floor_c()) fail(r, "more than floor(C) updates: " + with_cost(p, cm.c()));
      else if (e.x != closed[static_cast<std::size_t>(seen[k])])
        fail(r, "x off the geometric identity: " + with_cost(p, cm.c()));
      if (seen[k] == cm.floor_c() && e.w == 0 && e.x != last[k])
        fail(r, "frozen packet changed: " + with_cost(p, cm.c()));
      last[k] = e.x;
    }
    for (std::size_t k = 0; k < seen.size(); ++k) {
      const auto& pk = pd.packets()[k];
      if (pk.updates == cm.floor_c() && pk.x != 1) fail(r, "fully updated packet has x != 1");
    }
    ++r.instances;
  }
  r.seconds = timer.seconds();
  return r;
}

}  // namespace ncsched
