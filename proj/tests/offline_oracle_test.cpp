#include <doctest.h>

#include <random>
#include <sstream>

#include "ncsched/checks.hpp"
#include "ncsched/offline_oracle.hpp"

using namespace ncsched;

TEST_SUITE("offline_oracle") {
  TEST_CASE("constraint sets for slots 1,2 vs slot 3") {
    auto p = ArrivalPattern::from_slots({1, 2}, {3});
    auto tr = identify_constraints(p);
    REQUIRE(tr.horizon() == 3);
    CHECK(tr.at(1) == std::vector<PacketId>{1});
    CHECK(tr.at(2) == std::vector<PacketId>{1, 2});
    CHECK(tr.at(3) == std::vector<PacketId>{1});
    CHECK(tr.removed[2] == std::vector<PacketId>{2});
    CHECK(tr.removal_slot[1] == Slot{3});
    CHECK_FALSE(tr.removal_slot[0].has_value());

    CostModel cm(4);
    auto iv = extract_intervals(tr, p, cm);
    REQUIRE(iv.intervals.size() == 2);
    CHECK(iv.intervals[0].alpha == 1);
    CHECK(iv.intervals[0].open_ended);
    CHECK(iv.intervals[0].beta == drain_end(p, cm));
    CHECK(iv.intervals[1].alpha == 2);
    CHECK(iv.intervals[1].beta == 2);
    CHECK(opt_two_sided_closed_form(iv, cm) == 5);
    CHECK(opt_two_sided(p, cm) == 5);
    CHECK(opt_two_sided_bruteforce(p, cm) == 5);
  }

  TEST_CASE("surplus Q2 arrivals empty the set") {
    auto p = ArrivalPattern::from_slots({1, 1}, {2, 2, 2});
    auto tr = identify_constraints(p);
    CHECK(tr.at(2).empty());
    CHECK(tr.removed[1] == std::vector<PacketId>{2, 1});
  }

  TEST_CASE("same-slot match gives an empty interval") {
    auto p = ArrivalPattern::from_slots({3}, {3});
    CostModel cm(4);
    auto iv = extract_intervals(identify_constraints(p), p, cm);
    CHECK(iv.intervals[0].beta == iv.intervals[0].alpha - 1);
    CHECK(iv.intervals[0].length() == 0);
    CHECK(opt_two_sided(p, cm) == 0);
    CHECK(opt_two_sided_bruteforce(p, cm) == 0);
  }

  TEST_CASE("matched next slot holds one slot") {
    auto p = ArrivalPattern::from_slots({2}, {3});
    CHECK(opt_two_sided(p, CostModel(4)) == 1);
  }

  TEST_CASE("degenerate instances") {
    CHECK(opt_two_sided(ArrivalPattern::idle(5), CostModel(3)) == 0);
    CHECK(opt_two_sided_bruteforce(ArrivalPattern::from_slots({1, 4, 6}, {}), CostModel(3)) == 9);
    CHECK(opt_two_sided(ArrivalPattern::from_slots({1, 4, 6}, {}), CostModel(3)) == 9);
    CHECK(opt_one_sided(ArrivalPattern::idle(3), CostModel(3)).cost == 0);
  }

  TEST_CASE("one-sided optimum by enumeration") {
    auto a = opt_one_sided(ArrivalPattern::from_slots({1}, {3}), CostModel(4));
    CHECK(a.cost == 2);
    CHECK(a.x_star == 0);

    CostModel cm(3);
    auto p = ArrivalPattern::from_slots({1, 1}, {2, 5});
    auto b = opt_one_sided(p, cm);
    CHECK(b.cost == 4);
    CHECK(b.x_star == 1);
    CHECK(one_sided_objective_exact(p, cm, 0) == 5);
    CHECK(one_sided_objective_exact(p, cm, 1) == 4);
    CHECK(one_sided_objective_exact(p, cm, 2) == 6);
    CHECK(one_sided_lp_continuous_min(p, cm) == doctest::Approx(4.0).epsilon(1e-12));

    CHECK_THROWS_AS(opt_one_sided(ArrivalPattern::from_slots({1, 2}, {3}), cm), RejectedInput);
  }

  TEST_CASE("ski rental optimum") {
    CHECK(opt_one_sided(ArrivalPattern::from_slots({1}, {1}), CostModel(4)).cost == 0);
    CHECK(opt_one_sided(ArrivalPattern::from_slots({1}, {6}), CostModel(5)).cost == 5);
    CHECK(opt_one_sided(ArrivalPattern::from_slots({1}, {3}), CostModel(5)).cost == 2);
  }

  TEST_CASE("closed form matches brute force on random instances") {
    std::mt19937_64 rng(77);
    for (int k = 0; k < 300; ++k) {
      auto p = random_two_sided(rng, 5, 12);
      for (double c : {2.0, 3.0, 5.0}) {
        CostModel cm(c);
        INFO(describe(p), " C=", c);
        CHECK(opt_two_sided(p, cm) == opt_two_sided_bruteforce(p, cm));
      }
    }
  }

  TEST_CASE("an extra Q2 arrival never raises the optimum") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<Slot> slot(1, 10);
    for (int k = 0; k < 200; ++k) {
      auto p = random_two_sided(rng, 4, 10);
      auto q2 = p.q2_arrival_slots();
      q2.push_back(slot(rng));
      auto more = ArrivalPattern::from_slots(p.q1_arrival_slots(), q2, std::max<Slot>(p.horizon(), 10));
      CostModel cm(3);
      CHECK(opt_two_sided(more, cm) <= opt_two_sided(p, cm));
    }
  }

  TEST_CASE("brute force rejects large instances") {
    std::vector<Slot> many(9, 1);
    CHECK_THROWS_AS(opt_two_sided_bruteforce(ArrivalPattern::from_slots(many, many), CostModel(2)),
                    RejectedInput);
  }

  TEST_CASE("LP export") {
    CostModel cm(2);
    auto agg = lp_export(ArrivalPattern::from_slots({1, 3}, {}), cm, LpKind::OneSidedPrimal);
    CHECK(agg.find(" c1: x1 + z1 >= 1") != std::string::npos);
    CHECK(agg.find(" c2: x1 + z2 >= 1") != std::string::npos);
    CHECK(agg.find(" c3: x1 + x2 + z3 >= 2") != std::string::npos);
    CHECK(agg.find("End") != std::string::npos);

    auto per = lp_export(ArrivalPattern::from_slots({1, 3}, {}), cm, LpKind::TwoSidedPrimal);
    CHECK(per.find("c2_3: x2 + z2_3 >= 1") != std::string::npos);

    auto empty = lp_export(ArrivalPattern::idle(2), cm, LpKind::TwoSidedPrimal);
    CHECK(empty.find("\n c") == std::string::npos);
  }

  TEST_CASE("intervals csv") {
    auto p = ArrivalPattern::from_slots({1, 2}, {3});
    CostModel cm(4);
    std::ostringstream out;
    write_intervals_csv(out, extract_intervals(identify_constraints(p), p, cm));
    CHECK(out.str() == "packet,alpha,beta\n1,1," + std::to_string(drain_end(p, cm)) + "\n2,2,2\n");
  }
}
