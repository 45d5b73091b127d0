#include <doctest.h>

#include <cmath>

#include "ncsched/baselines.hpp"
#include "ncsched/netsim.hpp"
#include "ncsched/offline_oracle.hpp"
#include "ncsched/primal_dual.hpp"
#include "ncsched/randomized_scheduler.hpp"

using namespace ncsched;

TEST_SUITE("netsim") {
  TEST_CASE("traffic generation is seeded") {
    TrafficSpec spec{0.5, 0.1, 0.0, 500};
    auto r1 = replication_rng(9, 2, 0);
    auto r2 = replication_rng(9, 2, 0);
    auto r3 = replication_rng(9, 3, 0);
    auto a = gen_bernoulli_truncated_gaussian(spec, r1);
    CHECK(a == gen_bernoulli_truncated_gaussian(spec, r2));
    CHECK_FALSE(a == gen_bernoulli_truncated_gaussian(spec, r3));
  }

  TEST_CASE("sample mean arrival rate") {
    TrafficSpec spec{0.5, 0.5, 0.0, 10000};
    auto rng = replication_rng(1, 0, 0);
    auto p = gen_bernoulli_truncated_gaussian(spec, rng);
    const double sd = std::sqrt(0.25 / 10000.0);
    CHECK(std::abs(static_cast<double>(p.n1()) / 10000.0 - 0.5) <= 3 * sd);
    CHECK(std::abs(static_cast<double>(p.n2()) / 10000.0 - 0.5) <= 3 * sd);
  }

  TEST_CASE("truncated gaussian mean") {
    CHECK(truncated_mean(0.5, 2.0) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(truncated_mean(0.1, 2.0) == doctest::Approx(0.3908666896926348).epsilon(1e-9));
    CHECK(truncated_mean(0.3, 0.5) == doctest::Approx(0.3970601083778788).epsilon(1e-9));
    CHECK(truncated_mean(0.1, 0.0) == 0.1);

    TrafficSpec spec{0.5, 0.1, 2.0, 20000};
    auto rng = replication_rng(4, 0, 0);
    auto p = gen_bernoulli_truncated_gaussian(spec, rng);
    const double m = truncated_mean(0.1, 2.0);
    CHECK(std::abs(static_cast<double>(p.n2()) / 20000.0 - m) <= 4 * std::sqrt(m * (1 - m) / 20000.0));
  }

  TEST_CASE("invalid traffic") {
    CHECK_THROWS_AS(validate(TrafficSpec{1.5, 0.1, 0.0, 10}), RejectedInput);
    CHECK_THROWS_AS(validate(TrafficSpec{0.5, 0.1, -1.0, 10}), RejectedInput);
    CHECK_THROWS_AS(validate(TrafficSpec{0.5, 0.1, 0.0, 0}), RejectedInput);
  }

  TEST_CASE("idle traffic costs nothing") {
    auto res = run_single_relay(TrafficSpec{0.0, 0.0, 0.0, 200}, CostModel(5), 2, 1);
    CHECK(res.proposed.mean_cost() == 0);
    CHECK(res.optimized.mean_cost() == 0);
    CHECK(res.c_threshold.mean_cost() == 0);
  }

  TEST_CASE("single relay summary") {
    auto res = run_single_relay(TrafficSpec{0.5, 0.3, 0.0, 1000}, CostModel(5), 3, 7);
    CHECK(res.proposed.reps.size() == 3);
    CHECK(res.optimized.mean_cost() <= res.c_threshold.mean_cost());
    CHECK(res.search.grid.size() == 36);
    auto again = run_single_relay(TrafficSpec{0.5, 0.3, 0.0, 1000}, CostModel(5), 3, 7);
    CHECK(again.proposed.mean_cost() == res.proposed.mean_cost());
    CHECK(again.optimized.thresholds == res.optimized.thresholds);
  }

  TEST_CASE("two relays, one packet from each end") {
    // Relay 1 holds its packet (threshold 1), relay 2 forwards at once; the
    // packets meet at relay 1 in slot 2 and leave as one coded transmission.
    std::vector<std::unique_ptr<SchedulingPolicy>> pol;
    pol.push_back(std::make_unique<ThresholdPolicy>(Thresholds{1, 0}, true));
    pol.push_back(std::make_unique<ThresholdPolicy>(Thresholds{0, 0}, true));
    std::vector<CostModel> costs(2, CostModel(5));
    auto res = run_line_network(ArrivalPattern({1, 0, 0, 0, 0, 0}, {1, 0, 0, 0, 0, 0}), pol, costs);
    CHECK(res.relays[0].total() == 6);
    CHECK(res.relays[1].total() == 10);
    CHECK(res.coded == 1);
    CHECK(res.right_sink_slots == std::vector<Slot>{3});
    CHECK(res.left_sink_slots == std::vector<Slot>{2});
    CHECK(res.delivered_left == 1);
    CHECK(res.delivered_right == 1);
  }

  TEST_CASE("line network conserves packets") {
    TrafficSpec spec{0.4, 0.3, 0.0, 300};
    auto rng = replication_rng(2, 0, 0);
    auto p = gen_bernoulli_truncated_gaussian(spec, rng);
    std::vector<std::unique_ptr<SchedulingPolicy>> pol;
    for (int k = 0; k < 4; ++k) pol.push_back(std::make_unique<ProposedPolicy>(CostModel(3), 0.25 * k));
    std::vector<CostModel> costs(4, CostModel(3));
    auto res = run_line_network(p, pol, costs);
    CHECK(res.max_transmissions_per_slot <= 1);
    CHECK(res.delivered_right <= p.n1());
    CHECK(res.delivered_left <= p.n2());
    CHECK(res.delivered_right > 0);
    CHECK_THROWS_AS(run_line_network(p, pol, std::vector<CostModel>(3, CostModel(3))), RejectedInput);
  }

  TEST_CASE("zero traffic line network") {
    auto s = run_line_network_sweep_point(TrafficSpec{0.0, 0.0, 0.0, 50}, std::vector<CostModel>(2, CostModel(5)),
                                          2, 1);
    CHECK(s.proposed.mean_cost() == 0);
    CHECK(s.sub_optimized.mean_cost() == 0);
  }

  TEST_CASE("expected ratio on ski rental") {
    CostModel cm(10);
    const double bound = competitive_bound(10);
    for (Slot day : {1, 5, 11, 30}) {
      auto p = ski_rental_adapter(day);
      double opt = to_double(opt_one_sided(p, cm).cost);
      auto er = expected_ratio(p, [&](double u) { return std::make_unique<OneSidedScheduler>(cm, u); }, cm, opt,
                               2000, 42);
      CHECK_FALSE(er.infinite);
      CHECK(er.ratio <= bound + 0.02);
    }
  }

  TEST_CASE("ratio conventions") {
    bool inf = false;
    CHECK(reduced_ratio(0.0, 0.0, &inf) == 1.0);
    CHECK_FALSE(inf);
    CHECK(std::isinf(reduced_ratio(1.0, 0.0, &inf)));
    CHECK(inf);
    CHECK(reduced_ratio(3.0, 2.0, nullptr) == 1.5);
    auto s = summarize_ratios({1.0, 2.0, 1.5}, false);
    CHECK(s.mean == 1.5);
    CHECK(s.max == 2.0);
  }
}
