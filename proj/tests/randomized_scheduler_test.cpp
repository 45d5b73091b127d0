#include <doctest.h>

#include <sstream>

#include "ncsched/randomized_scheduler.hpp"

using namespace ncsched;

namespace {

std::vector<Slot> uncoded_q1_slots(const RunResult& r) {
  std::vector<Slot> out;
  for (std::size_t i = 0; i < r.decisions.size(); ++i)
    for (Count k = 0; k < r.decisions[i].uncoded_q1; ++k) out.push_back(static_cast<Slot>(i + 1));
  return out;
}

}  // namespace

TEST_SUITE("randomized_scheduler") {
  TEST_CASE("rounding counts thresholds crossed") {
    RoundingState rs{0.5, 0.0, 0};
    CHECK(rs.advance(0.4) == 0);
    CHECK(rs.advance(1.0) == 1);
    CHECK(rs.advance(2.7) == 2);
    CHECK(rs.shifts == 3);
    CHECK(rs.advance(2.7) == 0);
  }

  TEST_CASE("one-sided scheduler, one packet, C=2") {
    CostModel cm(2);
    auto p = ArrivalPattern::from_slots({1}, {}, 3);
    OneSidedScheduler early(cm, 0.3);
    CHECK(uncoded_q1_slots(run_policy(p, early, cm)) == std::vector<Slot>{1});
    OneSidedScheduler late(cm, 0.7);
    CHECK(uncoded_q1_slots(run_policy(p, late, cm)) == std::vector<Slot>{2});
  }

  TEST_CASE("one-sided scheduler codes with arriving Q2 packets") {
    CostModel cm(4);
    OneSidedScheduler s(cm, 0.99);
    auto r = run_policy(ArrivalPattern::from_slots({1, 1}, {2, 2}), s, cm);
    CHECK(r.decisions[1].coded == 2);
    CHECK(r.ledger.coded == 2);
    CHECK_THROWS_AS(run_policy(ArrivalPattern::from_slots({1, 2}, {}), s, cm), RejectedInput);
  }

  TEST_CASE("two-sided scheduler, packets at slots 1 and 3, u=0.5") {
    CostModel cm(2);
    TwoSidedScheduler s(cm, 0.5, TwoSidedMode::Unconstrained);
    auto r = run_policy(ArrivalPattern::from_slots({1, 3}, {}), s, cm);
    CHECK(uncoded_q1_slots(r) == std::vector<Slot>{2, 4});
    CHECK(r.ledger.total() == 6);
    CHECK(s.stats().idle_crossings == 0);
  }

  TEST_CASE("decision trace csv") {
    CostModel cm(2);
    TwoSidedScheduler s(cm, 0.5, TwoSidedMode::Unconstrained);
    auto r = run_policy(ArrivalPattern::from_slots({1, 3}, {}, 4), s, cm, {false, true});
    std::ostringstream out;
    write_decision_trace_csv(out, r.decisions, s.stats().shift_history);
    CHECK(out.str() == "slot,coded,uncoded_q1,uncoded_q2,u_shift\n1,0,0,0,0\n2,0,1,0,1\n3,0,0,0,1\n4,0,1,0,2\n");
  }

  TEST_CASE("u outside [0,1) is rejected") {
    CHECK_THROWS_AS(OneSidedScheduler(CostModel(2), 1.0), RejectedInput);
    CHECK_THROWS_AS(ProposedPolicy(CostModel(2), -0.1), RejectedInput);
  }

  TEST_CASE("waiting packets") {
    WaitingPackets w;
    w.add(1);
    w.add(2);
    w.add(5);
    CHECK(w.contains(2));
    CHECK(w.remove(2));
    CHECK_FALSE(w.remove(2));
    PacketId id = 0;
    CHECK(w.pop_latest(&id));
    CHECK(id == 5);
    std::vector<PdPacket<double>> pk(5);
    pk[0].x = 0.2;
    w.add(3);
    pk[2].x = 0.2;
    CHECK(w.pop_largest(pk, &id));
    CHECK(id == 1);
    CHECK(w.size() == 1);
  }

  TEST_CASE("waiting-coding routing") {
    auto a = waiting_coding_route({2, Side::Q1, 0}, {1, 5});
    CHECK(a.coded == 3);
    CHECK(a.next.qw == 2);
    CHECK(a.next.owner == Side::Q2);
    CHECK(a.flip);
    auto b = waiting_coding_route({3, Side::Q1, 0}, {0, 2});
    CHECK(b.coded == 2);
    CHECK(b.next.qw == 1);
    CHECK(b.next.owner == Side::Q1);
    CHECK_FALSE(b.flip);
    CHECK_THROWS_AS(waiting_coding_route({-1, Side::Q1, 0}, {0, 0}), RejectedInput);
  }

  TEST_CASE("spreading bursts") {
    auto p = spread_arrivals(ArrivalPattern({0, 3, 0, 0}, {0, 0, 0, 0}));
    CHECK(p.a1_series() == std::vector<Count>{0, 1, 1, 1});
    auto q = spread_arrivals(ArrivalPattern({2, 0}, {0, 3}));
    CHECK(q.a1_series() == std::vector<Count>{1, 1, 0, 0});
    CHECK(q.a2_series() == std::vector<Count>{0, 1, 1, 1});
  }

  TEST_CASE("constrained scheduler sends an unpaired Q2 arrival uncoded") {
    CostModel cm(5);
    TwoSidedScheduler s(cm, 0.9, TwoSidedMode::Constrained);
    auto d = s.decide({0, 1}, {0, 1}, 1);
    CHECK(d == Decision{0, 0, 1});
    TwoSidedScheduler fresh(cm, 0.9, TwoSidedMode::Constrained);
    auto r = run_policy(ArrivalPattern({1, 0, 0}, {0, 1, 1}), fresh, cm);
    CHECK(r.decisions[1] == Decision{1, 0, 0});
    CHECK(r.decisions[2] == Decision{0, 0, 1});
  }

  TEST_CASE("proposed policy lets an unpaired Q2 arrival wait") {
    CostModel cm(5);
    ProposedPolicy pol(cm, 0.9);
    auto d = pol.decide({0, 1}, {0, 1}, 1);
    CHECK(d.total() == 0);
    CHECK(pol.waiting_coding().owner == Side::Q2);
    CHECK(pol.waiting_coding().qw == 1);
    CHECK(pol.side_flips() == 1);
  }

  TEST_CASE("proposed policy on alternating arrivals") {
    // Each coded pair adds 1/(theta*C) to the running total; with u = 0.99 and
    // C = 5 the first seven pairs stay below the first threshold.
    CostModel cm(5);
    std::vector<Count> a1, a2;
    for (int k = 0; k < 7; ++k) {
      a1.insert(a1.end(), {1, 0});
      a2.insert(a2.end(), {0, 1});
    }
    ProposedPolicy pol(cm, 0.99);
    auto r = run_policy(ArrivalPattern(a1, a2), pol, cm, {false, true});
    CHECK(r.ledger.total() == doctest::Approx(7 * (5 + 1)));
    CHECK(r.ledger.coded == 7);

    a1.insert(a1.end(), {1, 0});
    a2.insert(a2.end(), {0, 1});
    ProposedPolicy more(cm, 0.99);
    auto r8 = run_policy(ArrivalPattern(a1, a2), more, cm, {false, true});
    CHECK(r8.ledger.coded == 7);
    CHECK(r8.ledger.uncoded_q1 == 1);
  }

  TEST_CASE("proposed policy never exceeds one transmission") {
    CostModel cm(3);
    ProposedPolicy pol(cm, 0.2);
    auto p = ArrivalPattern({1, 1, 0, 1, 1, 1, 0, 0, 1}, {0, 1, 1, 1, 0, 0, 1, 1, 0});
    auto r = run_policy(p, pol, cm);
    for (const auto& d : r.decisions) CHECK(d.total() <= 1);
    CHECK_THROWS_AS(run_policy(ArrivalPattern({2}, {0}), pol, cm), RejectedInput);
  }
}
