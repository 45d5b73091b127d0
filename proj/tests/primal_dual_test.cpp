#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ncsched/offline_oracle.hpp"
#include "ncsched/primal_dual.hpp"

using namespace ncsched;

TEST_SUITE("primal_dual") {
  TEST_CASE("theta") {
    CHECK(*compute_theta(2.0).exact == Rational(5, 4));
    CHECK(*compute_theta(1.5).exact == Rational(2, 3));
    CHECK(*compute_theta(10.0).exact == Rational(15937424601LL, 10000000000LL));
    CHECK(compute_theta(10.0).value == doctest::Approx(1.5937424601));
    CHECK_THROWS_AS(compute_theta(1.0), RejectedInput);
    CHECK_THROWS_AS(compute_theta(std::nan("")), RejectedInput);
    auto big = compute_theta(1e7);
    CHECK_FALSE(big.exact.has_value());
    CHECK(big.value == doctest::Approx(std::exp(1.0) - 1).epsilon(1e-6));
  }

  TEST_CASE("bound constant") {
    CHECK(competitive_bound_exact(2.0) == Rational(9, 5));
    CHECK(competitive_bound(10.0) == doctest::Approx(1.627453948825116).epsilon(1e-12));
    CHECK(competitive_bound(1e6) == doctest::Approx(std::exp(1.0) / (std::exp(1.0) - 1)).epsilon(1e-5));
    CHECK(competitive_bound(100.0) > competitive_bound(1e6));
  }

  TEST_CASE("two-sided trajectory, packets at slots 1 and 3, C=2") {
    CostModel cm(2);
    TwoSidedPrimalDual<Rational> pd(cm, true);
    auto p = ArrivalPattern::from_slots({1, 3}, {});
    const Rational expect[4][2] = {{Rational(2, 5), 0}, {1, 0}, {1, Rational(2, 5)}, {1, 1}};
    for (Slot t = 1; t <= 4; ++t) {
      auto su = pd.step(t, p.at(t));
      CHECK(su.updated == 1);
      CHECK(pd.packets()[0].x == expect[t - 1][0]);
      if (t >= 3) CHECK(pd.packets()[1].x == expect[t - 1][1]);
    }
    for (Slot t = 5; t <= 8; ++t) CHECK(pd.step(t, p.at(t)).updated == 0);
    CHECK(pd.primal() == Rational(36, 5));
    CHECK(pd.dual() == 4);
    CHECK(pd.primal() / pd.dual() == competitive_bound_exact(2.0));

    std::ostringstream out;
    pd.write_trace_csv(out);
    CHECK(out.str().rfind("slot,packet,x_i,z_i,w_i\n1,1,0.4,1,1\n2,1,1,0.6,1\n", 0) == 0);
  }

  TEST_CASE("Q2 arrival removes the newest packet before updating") {
    CostModel cm(3);
    TwoSidedPrimalDual<Rational> pd(cm);
    pd.step(1, {1, 0});
    pd.step(2, {1, 0});
    Rational x2 = pd.packets()[1].x;
    pd.step(3, {0, 1});
    CHECK(pd.last_removed() == std::vector<PacketId>{2});
    CHECK(pd.active() == std::vector<PacketId>{1});
    CHECK(pd.packets()[1].removal == Slot{3});
    for (Slot t = 4; t < 10; ++t) pd.step(t, {0, 0});
    CHECK(pd.packets()[1].x == x2);
  }

  TEST_CASE("constrained step") {
    CostModel cm(4);
    TwoSidedPrimalDual<Rational> pd(cm);
    pd.step_constrained(1, {1, 0});
    pd.step_constrained(2, {1, 0});
    Rational before = pd.total_x();
    auto su = pd.step_constrained(3, {0, 1});
    CHECK(su.skipped);
    CHECK(su.updated == 0);
    CHECK(pd.total_x() == before);
    CHECK(pd.active().size() == 1);
    CHECK_THROWS_AS(pd.step_constrained(4, {2, 0}), RejectedInput);

    TwoSidedPrimalDual<Rational> a(cm), b(cm);
    a.step_constrained(1, {1, 0});
    b.step(1, {1, 0});
    CHECK(a.total_x() == b.total_x());
  }

  TEST_CASE("no arrivals") {
    TwoSidedPrimalDual<double> pd(CostModel(3));
    for (Slot t = 1; t < 5; ++t) pd.step(t, {0, 0});
    CHECK(pd.primal() == 0);
    CHECK(pd.dual() == 0);
  }

  TEST_CASE("one-sided: geometric increments") {
    CostModel cm(2);
    OneSidedPrimalDual<Rational> pd(1, cm);
    auto s1 = pd.step(1, 0);
    CHECK(s1.delta_x == Rational(2, 5));
    auto s2 = pd.step(2, 0);
    CHECK(s2.delta_x == Rational(3, 5));
    CHECK(s2.delta_primal == competitive_bound_exact(2.0) * s2.delta_dual);
    CHECK(pd.step(3, 0).updated == 0);
    CHECK(pd.w_sum() == 2);
  }

  TEST_CASE("one-sided: Q2 arrival in slot 1 empties the range") {
    OneSidedPrimalDual<Rational> pd(1, CostModel(2));
    pd.step(1, 1);
    CHECK(pd.primal() == 0);
    CHECK(pd.dual() == 0);
  }

  TEST_CASE("one-sided ratio against the optimum") {
    CostModel cm(3);
    auto p = ArrivalPattern::from_slots({1, 1, 1}, {2, 4});
    OneSidedPrimalDual<Rational> pd(3, cm);
    for (Slot t = 1; t <= drain_end(p, cm); ++t) pd.step(t, p.n2_through(t));
    CHECK(pd.primal() <= competitive_bound_exact(3.0) * opt_one_sided(p, cm).cost);
    CHECK(pd.dual() <= opt_one_sided(p, cm).cost);
  }

  TEST_CASE("freeze after floor(C) updates") {
    CostModel cm(3.5);
    TwoSidedPrimalDual<Rational> pd(cm);
    pd.step(1, {1, 0});
    for (Slot t = 2; t <= 3; ++t) pd.step(t, {0, 0});
    CHECK(pd.packets()[0].updates == 3);
    CHECK(pd.packets()[0].x >= 1);
    Rational frozen = pd.packets()[0].x;
    for (Slot t = 4; t <= 9; ++t) CHECK(pd.step(t, {0, 0}).updated == 0);
    CHECK(pd.packets()[0].x == frozen);
  }

  TEST_CASE("double and exact runs agree") {
    CostModel cm(5);
    TwoSidedPrimalDual<Rational> e(cm);
    TwoSidedPrimalDual<double> d(cm);
    auto p = ArrivalPattern::from_slots({1, 1, 2, 4, 4, 7}, {3, 5, 5, 9});
    for (Slot t = 1; t <= drain_end(p, cm); ++t) {
      e.step(t, p.at(t));
      d.step(t, p.at(t));
    }
    CHECK(d.primal() == doctest::Approx(to_double(e.primal())).epsilon(1e-12));
    CHECK(d.dual() == to_double(e.dual()));
  }
}
