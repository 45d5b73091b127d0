#include "ncsched/netsim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ncsched/randomized_scheduler.hpp"

namespace ncsched {

void validate(const TrafficSpec& spec) {
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!prob(spec.p1) || !prob(spec.p2)) throw RejectedInput("arrival means must lie in [0,1]");
  if (!(spec.sigma2 >= 0.0) || !std::isfinite(spec.sigma2))
    throw RejectedInput("variance must be finite and non-negative");
  if (spec.horizon < 1) throw RejectedInput("horizon must be at least one slot");
}

ArrivalPattern gen_bernoulli_truncated_gaussian(const TrafficSpec& spec, std::mt19937_64& rng) {
  validate(spec);
  const auto n = static_cast<std::size_t>(spec.horizon);
  std::vector<Count> a1(n), a2(n);
  const double sd = std::sqrt(spec.sigma2);
  std::normal_distribution<double> noise(0.0, sd > 0.0 ? sd : 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t t = 0; t < n; ++t) {
    double p1 = spec.p1, p2 = spec.p2;
    if (sd > 0.0) {
      p1 = std::clamp(spec.p1 + noise(rng), 0.0, 1.0);
      p2 = std::clamp(spec.p2 + noise(rng), 0.0, 1.0);
    }
    a1[t] = unit(rng) < p1 ? 1 : 0;
    a2[t] = unit(rng) < p2 ? 1 : 0;
  }
  return ArrivalPattern(std::move(a1), std::move(a2));
}

double truncated_mean(double p, double sigma2) {
  if (sigma2 <= 0.0) return std::clamp(p, 0.0, 1.0);
  const double s = std::sqrt(sigma2);
  auto cdf = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };
  auto pdf = [](double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); };
  double lo = -p / s, hi = (1.0 - p) / s;
  double inside = p * (cdf(hi) - cdf(lo)) + s * (pdf(lo) - pdf(hi));
  return inside + (1.0 - cdf(hi));
}

std::mt19937_64 replication_rng(std::uint64_t seed_base, std::uint64_t rep, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed_base), static_cast<std::uint32_t>(seed_base >> 32),
                    static_cast<std::uint32_t>(rep), static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

const char* policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::Proposed: return "proposed";
    case PolicyKind::OptimizedThreshold: return "optimized-threshold";
    case PolicyKind::CThreshold: return "c-threshold";
    case PolicyKind::SubOptimizedThreshold: return "sub-optimized-threshold";
  }
  return "unknown";
}

double PolicySummary::mean_cost() const {
  if (reps.empty()) return 0.0;
  double s = 0.0;
  for (const auto& r : reps) s += r.cost;
  return s / static_cast<double>(reps.size());
}

double PolicySummary::mean_coded() const {
  if (reps.empty()) return 0.0;
  double s = 0.0;
  for (const auto& r : reps) s += static_cast<double>(r.coded);
  return s / static_cast<double>(reps.size());
}

ReplicationOutcome run_relay(const ArrivalPattern& pattern, SchedulingPolicy& policy,
                             const CostModel& cm) {
  RunResult r = run_policy(pattern, policy, cm, {false, false});
  return {r.ledger.total(), r.ledger.coded};
}

namespace {

double uniform_u(std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace

SingleRelayResult run_single_relay(const TrafficSpec& spec, const CostModel& cm,
                                   Count replications, std::uint64_t seed_base,
                                   Count max_threshold) {
  if (replications < 1) throw RejectedInput("need at least one replication");
  if (max_threshold < 0) max_threshold = default_max_threshold(cm);
  std::vector<ArrivalPattern> patterns;
  for (Count r = 0; r < replications; ++r) {
    auto rng = replication_rng(seed_base, static_cast<std::uint64_t>(r), 0);
    patterns.push_back(gen_bernoulli_truncated_gaussian(spec, rng));
  }

  SingleRelayResult out;
  out.proposed.kind = PolicyKind::Proposed;
  out.optimized.kind = PolicyKind::OptimizedThreshold;
  out.c_threshold.kind = PolicyKind::CThreshold;
  out.search = optimize_thresholds(patterns, cm, max_threshold, true);
  out.optimized.thresholds = out.search.best;
  out.c_threshold.thresholds = c_threshold(cm);

  for (Count r = 0; r < replications; ++r) {
    const auto& p = patterns[static_cast<std::size_t>(r)];
    auto rng = replication_rng(seed_base, static_cast<std::uint64_t>(r), 1);
    ProposedPolicy proposed(cm, uniform_u(rng));
    out.proposed.reps.push_back(run_relay(p, proposed, cm));
    auto opt = simulate_threshold(p, out.optimized.thresholds, cm, true);
    out.optimized.reps.push_back({opt.cost, opt.coded});
    auto ct = simulate_threshold(p, out.c_threshold.thresholds, cm, true);
    out.c_threshold.reps.push_back({ct.cost, ct.coded});
  }
  return out;
}

LineNetworkResult run_line_network(const ArrivalPattern& external,
                                   std::vector<std::unique_ptr<SchedulingPolicy>>& policies,
                                   const std::vector<CostModel>& costs) {
  const std::size_t n = policies.size();
  if (n == 0) throw RejectedInput("line network needs at least one relay");
  if (costs.size() != n) throw RejectedInput("one cost model per relay");

  LineNetworkResult res;
  res.relays.resize(n);
  std::vector<RelayQueues> q(n);
  // Packets sent in the previous slot, waiting to enter each relay.
  std::vector<Count> from_left(n, 0), from_right(n, 0), next_left(n, 0), next_right(n, 0);
  for (Slot t = 1; t <= external.horizon(); ++t) {
    std::fill(next_left.begin(), next_left.end(), 0);
    std::fill(next_right.begin(), next_right.end(), 0);
    for (std::size_t k = 0; k < n; ++k) {
      SlotArrivals a{k == 0 ? external.a1(t) : from_left[k],
                     k + 1 == n ? external.a2(t) : from_right[k]};
      q[k].q1 += a.a1;
      q[k].q2 += a.a2;
      Decision d = policies[k]->decide(q[k], a, t);
      validate(d, q[k]);
      if (d.total() > 1) throw std::logic_error("relay exceeded one transmission per slot");
      res.max_transmissions_per_slot = std::max(res.max_transmissions_per_slot, d.total());
      SlotCost sc = slot_cost(q[k], d, costs[k]);
      res.relays[k].add(sc, d, false);
      q[k] = queue_step(q[k], d, {0, 0});

      Count rightward = d.coded + d.uncoded_q1;
      Count leftward = d.coded + d.uncoded_q2;
      if (k + 1 == n) {
        res.delivered_right += rightward;
        res.right_sink_slots.insert(res.right_sink_slots.end(), static_cast<std::size_t>(rightward), t);
      } else {
        next_left[k + 1] += rightward;
      }
      if (k == 0) {
        res.delivered_left += leftward;
        res.left_sink_slots.insert(res.left_sink_slots.end(), static_cast<std::size_t>(leftward), t);
      } else {
        next_right[k - 1] += leftward;
      }
    }
    from_left.swap(next_left);
    from_right.swap(next_right);
  }
  for (const auto& l : res.relays) {
    res.total_cost += l.total();
    res.coded += l.coded;
  }
  return res;
}

LineNetworkSummary run_line_network_sweep_point(const TrafficSpec& spec,
                                                const std::vector<CostModel>& costs,
                                                Count replications, std::uint64_t seed_base,
                                                Count max_threshold) {
  if (replications < 1) throw RejectedInput("need at least one replication");
  if (costs.empty()) throw RejectedInput("line network needs at least one relay");
  if (max_threshold < 0) {
    max_threshold = 0;
    for (const auto& cm : costs) max_threshold = std::max(max_threshold, default_max_threshold(cm));
  }
  std::vector<ArrivalPattern> patterns;
  for (Count r = 0; r < replications; ++r) {
    auto rng = replication_rng(seed_base, static_cast<std::uint64_t>(r), 0);
    patterns.push_back(gen_bernoulli_truncated_gaussian(spec, rng));
  }
  const std::size_t n = costs.size();

  auto run_shared = [&](const Thresholds& th, const ArrivalPattern& p) {
    std::vector<std::unique_ptr<SchedulingPolicy>> policies;
    for (std::size_t k = 0; k < n; ++k) policies.push_back(std::make_unique<ThresholdPolicy>(th, true));
    return run_line_network(p, policies, costs);
  };

  LineNetworkSummary out;
  out.proposed.kind = PolicyKind::Proposed;
  out.sub_optimized.kind = PolicyKind::SubOptimizedThreshold;
  out.search = optimize_thresholds(max_threshold, [&](const Thresholds& th) {
    double sum = 0.0;
    for (const auto& p : patterns) sum += run_shared(th, p).total_cost;
    return sum / static_cast<double>(patterns.size());
  });
  out.sub_optimized.thresholds = out.search.best;

  for (Count r = 0; r < replications; ++r) {
    const auto& p = patterns[static_cast<std::size_t>(r)];
    auto rng = replication_rng(seed_base, static_cast<std::uint64_t>(r), 1);
    std::vector<std::unique_ptr<SchedulingPolicy>> policies;
    for (std::size_t k = 0; k < n; ++k) policies.push_back(std::make_unique<ProposedPolicy>(costs[k], uniform_u(rng)));
    auto res = run_line_network(p, policies, costs);
    out.proposed.reps.push_back({res.total_cost, res.coded});
    auto sub = run_shared(out.search.best, p);
    out.sub_optimized.reps.push_back({sub.total_cost, sub.coded});
  }
  return out;
}

ExpectedRatio expected_ratio(const ArrivalPattern& pattern, const RandomizedFactory& make,
                             const CostModel& cm, double opt, Count draws, std::uint64_t seed) {
  if (draws < 1) throw RejectedInput("need at least one draw");
  std::mt19937_64 rng(seed);
  double sum = 0.0;
  const double constant = cm.c() * static_cast<double>(pattern.n2());
  for (Count k = 0; k < draws; ++k) {
    auto policy = make(uniform_u(rng));
    RunResult r = run_policy(pattern, *policy, cm, {true, false});
    sum += r.ledger.total() - constant;
  }
  ExpectedRatio out;
  out.mean_reduced_cost = sum / static_cast<double>(draws);
  out.opt = opt;
  out.ratio = reduced_ratio(out.mean_reduced_cost, opt, &out.infinite);
  return out;
}

double reduced_ratio(double j_reduced, double opt, bool* infinite) {
  constexpr double kTol = 1e-9;
  if (opt <= kTol) {
    if (j_reduced <= kTol) return 1.0;
    if (infinite) *infinite = true;
    return std::numeric_limits<double>::infinity();
  }
  return j_reduced / opt;
}

RatioStats summarize_ratios(const std::vector<double>& samples, bool infinite) {
  RatioStats s;
  s.samples = samples;
  s.infinite = infinite;
  if (samples.empty()) return s;
  s.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(samples.size());
  s.max = *std::max_element(samples.begin(), samples.end());
  return s;
}

}  // namespace ncsched
