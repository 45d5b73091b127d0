#include "ncsched/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "ncsched/io.hpp"

namespace ncsched {

Decision threshold_decide(const Thresholds& th, const RelayQueues& q, bool one_tx) {
  Decision d;
  d.coded = std::min(q.q1, q.q2);
  if (one_tx) d.coded = std::min<Count>(d.coded, 1);
  if (d.coded > 0 && one_tx) return d;
  Count left1 = q.q1 - d.coded, left2 = q.q2 - d.coded;
  if (left1 > 0 && left2 == 0 && left1 > th.theta1) d.uncoded_q1 = 1;
  if (left2 > 0 && left1 == 0 && left2 > th.theta2) d.uncoded_q2 = 1;
  return d;
}

Thresholds c_threshold(const CostModel& cm) { return {cm.floor_c(), cm.floor_c()}; }

ThresholdRun simulate_threshold(const ArrivalPattern& pattern, const Thresholds& th,
                                const CostModel& cm, bool one_tx) {
  const auto& a1 = pattern.a1_series();
  const auto& a2 = pattern.a2_series();
  const double c = cm.c();
  RelayQueues q;
  Count tx = 0, hold = 0, coded = 0;
  for (std::size_t t = 0; t < a1.size(); ++t) {
    q.q1 += a1[t];
    q.q2 += a2[t];
    Decision d = threshold_decide(th, q, one_tx);
    q.q1 -= d.coded + d.uncoded_q1;
    q.q2 -= d.coded + d.uncoded_q2;
    tx += d.total();
    coded += d.coded;
    hold += q.q1 + q.q2;
  }
  return {c * static_cast<double>(tx) + static_cast<double>(hold), coded};
}

ThresholdSearch optimize_thresholds(Count max_threshold,
                                    const std::function<double(const Thresholds&)>& mean_cost) {
  if (max_threshold < 0) throw RejectedInput("threshold search range is empty");
  ThresholdSearch s;
  bool first = true;
  for (Count t1 = 0; t1 <= max_threshold; ++t1) {
    for (Count t2 = 0; t2 <= max_threshold; ++t2) {
      Thresholds th{t1, t2};
      double cost = mean_cost(th);
      s.grid.push_back({th, cost});
      if (first || cost < s.best_cost) {
        s.best = th;
        s.best_cost = cost;
        first = false;
      }
    }
  }
  return s;
}

ThresholdSearch optimize_thresholds(const std::vector<ArrivalPattern>& patterns,
                                    const CostModel& cm, Count max_threshold, bool one_tx) {
  if (patterns.empty()) throw RejectedInput("threshold search needs at least one pattern");
  return optimize_thresholds(max_threshold, [&](const Thresholds& th) {
    double sum = 0.0;
    for (const auto& p : patterns) sum += simulate_threshold(p, th, cm, one_tx).cost;
    return sum / static_cast<double>(patterns.size());
  });
}

Count default_max_threshold(const CostModel& cm) { return cm.ceil_c(); }

void write_threshold_sweep_csv(std::ostream& out, const ThresholdSearch& search) {
  out << "theta1,theta2,mean_cost\n";
  for (const auto& g : search.grid)
    out << g.th.theta1 << ',' << g.th.theta2 << ',' << format_number(g.mean_cost) << '\n';
}

ArrivalPattern ski_rental_adapter(Slot last_day) {
  if (last_day < 1) throw RejectedInput("ski-rental horizon must be at least one day");
  return ArrivalPattern::from_slots({1}, {last_day});
}

}  // namespace ncsched
