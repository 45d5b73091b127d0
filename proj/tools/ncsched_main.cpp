#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ncsched/baselines.hpp"
#include "ncsched/checks.hpp"
#include "ncsched/experiment.hpp"
#include "ncsched/io.hpp"
#include "ncsched/offline_oracle.hpp"
#include "ncsched/primal_dual.hpp"
#include "ncsched/randomized_scheduler.hpp"

using namespace ncsched;

namespace {

constexpr int kOk = 0, kVerifyFailed = 1, kConfigError = 2;

struct Overrides {
  std::string config;
  std::string experiment;
  std::vector<double> costs, p2, sigma2;
  std::vector<Count> relays;
  std::optional<double> p1;
  std::optional<Slot> horizon;
  std::optional<Count> reps, draws, instances, max_threshold;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON experiment config");
  cmd->add_option("--experiment", o.experiment, "experiment kind");
  cmd->add_option("--c", o.costs, "transmission cost grid");
  cmd->add_option("--p1", o.p1, "mean Q1 arrival rate");
  cmd->add_option("--p2", o.p2, "mean Q2 arrival rate grid");
  cmd->add_option("--sigma2", o.sigma2, "rate variance grid");
  cmd->add_option("--relays", o.relays, "relay count grid");
  cmd->add_option("--horizon", o.horizon, "slots per replication");
  cmd->add_option("--reps", o.reps, "replications per grid point");
  cmd->add_option("--draws", o.draws, "Monte-Carlo draws per point");
  cmd->add_option("--instances", o.instances, "random instances per suite");
  cmd->add_option("--max-threshold", o.max_threshold, "largest threshold searched");
  cmd->add_option("--seed", o.seed, "base seed");
  cmd->add_option("--out", o.out, "output directory");
}

ExperimentConfig resolve(const Overrides& o) {
  ExperimentConfig cfg;
  if (!o.config.empty()) {
    cfg = load_config(o.config);
  } else if (!o.seed) {
    throw ConfigError("a seed is required: pass --seed or a config file");
  }
  if (!o.experiment.empty()) cfg.kind = parse_kind(o.experiment);
  if (!o.costs.empty()) cfg.costs = o.costs;
  if (!o.p2.empty()) cfg.p2 = o.p2;
  if (!o.sigma2.empty()) cfg.sigma2 = o.sigma2;
  if (!o.relays.empty()) cfg.relays = o.relays;
  if (o.p1) cfg.p1 = *o.p1;
  if (o.horizon) cfg.horizon = *o.horizon;
  if (o.reps) cfg.replications = *o.reps;
  if (o.draws) cfg.draws = *o.draws;
  if (o.instances) cfg.instances = *o.instances;
  if (o.max_threshold) cfg.max_threshold = *o.max_threshold;
  if (o.seed) cfg.seed = *o.seed;
  if (o.out) cfg.out_dir = *o.out;
  validate(cfg);
  return cfg;
}

int report(const std::vector<CheckResult>& results) {
  bool ok = true;
  for (const auto& r : results) {
    std::printf("%s  %-78s %8lld inst  %7.2fs\n", r.passed() ? "PASS" : "FAIL", r.name.c_str(),
                static_cast<long long>(r.instances), r.seconds);
    if (!r.detail.empty()) std::printf("      %s\n", r.detail.c_str());
    ok = ok && r.passed();
  }
  return ok ? kOk : kVerifyFailed;
}

ArrivalPattern load_pattern(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read pattern " + path);
  return read_pattern_csv(in);
}

std::unique_ptr<SchedulingPolicy> make_policy(const std::string& name, const CostModel& cm, double u,
                                              const Thresholds& th) {
  if (name == "proposed") return std::make_unique<ProposedPolicy>(cm, u);
  if (name == "one-sided") return std::make_unique<OneSidedScheduler>(cm, u);
  if (name == "two-sided") return std::make_unique<TwoSidedScheduler>(cm, u, TwoSidedMode::Unconstrained);
  if (name == "constrained") return std::make_unique<TwoSidedScheduler>(cm, u, TwoSidedMode::Constrained);
  if (name == "threshold") return std::make_unique<ThresholdPolicy>(th, true);
  if (name == "c-threshold") return std::make_unique<ThresholdPolicy>(c_threshold(cm), true);
  throw ConfigError("unknown policy '" + name + "'");
}

LpKind parse_lp_kind(const std::string& s) {
  if (s == "one-sided-primal") return LpKind::OneSidedPrimal;
  if (s == "one-sided-dual") return LpKind::OneSidedDual;
  if (s == "two-sided-primal") return LpKind::TwoSidedPrimal;
  if (s == "two-sided-dual") return LpKind::TwoSidedDual;
  throw ConfigError("unknown LP kind '" + s + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online network-coding scheduler for two-way relays"};
  app.require_subcommand(1);

  Overrides ov;
  auto* verify = app.add_subcommand("verify", "run every property suite");
  add_overrides(verify, ov);
  auto* golden = app.add_subcommand("golden", "run the worked examples only");
  auto* sweep = app.add_subcommand("sweep", "run a sweep and write CSV, gnuplot data and SVG");
  add_overrides(sweep, ov);

  std::string pattern_path, lp_kind = "two-sided-primal", policy = "proposed", out_path, trace_path;
  double cost = 2.0, u = 0.5;
  bool drain = false, exact = false;
  Count theta1 = 0, theta2 = 0;

  auto* opt = app.add_subcommand("opt", "offline optimum of an arrival pattern");
  opt->add_option("pattern", pattern_path, "pattern CSV (slot,a1,a2)")->required();
  opt->add_option("--c", cost, "transmission cost");

  auto* lp = app.add_subcommand("lp-export", "print the LP of a pattern");
  lp->add_option("pattern", pattern_path)->required();
  lp->add_option("--c", cost);
  lp->add_option("--kind", lp_kind, "one-sided-primal | one-sided-dual | two-sided-primal | two-sided-dual");

  auto* intervals = app.add_subcommand("intervals", "waiting intervals of the offline optimum as CSV");
  intervals->add_option("pattern", pattern_path)->required();
  intervals->add_option("--c", cost);

  auto* run = app.add_subcommand("run", "run one policy on a pattern and print the cost ledger");
  run->add_option("pattern", pattern_path)->required();
  run->add_option("--c", cost);
  run->add_option("--policy", policy, "proposed | one-sided | two-sided | constrained | threshold | c-threshold");
  run->add_option("--u", u, "rounding offset in [0,1)");
  run->add_option("--theta1", theta1);
  run->add_option("--theta2", theta2);
  run->add_flag("--drain", drain, "extend the run by the drain window");
  run->add_option("--decisions", trace_path, "write the decision trace CSV here");
  run->add_option("--out", out_path, "ledger CSV path (default stdout)");

  auto* pd = app.add_subcommand("trace", "fractional primal-dual state per slot as CSV");
  pd->add_option("pattern", pattern_path)->required();
  pd->add_option("--c", cost);
  pd->add_flag("--exact", exact, "exact rational arithmetic");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*verify) {
      ExperimentConfig cfg = ov.seed || !ov.config.empty() ? resolve(ov) : ExperimentConfig{};
      if (ov.instances) cfg.instances = *ov.instances;
      if (ov.draws) cfg.draws = *ov.draws;
      return report(run_verify(cfg.instances, cfg.draws, cfg.seed));
    }
    if (*golden) return report(run_golden());
    if (*sweep) {
      ExperimentConfig cfg = resolve(ov);
      if (cfg.kind == ExperimentKind::Verify) return report(run_verify(cfg.instances, cfg.draws, cfg.seed));
      if (cfg.kind == ExperimentKind::GoldenExamples) return report(run_golden());
      for (const auto& p : run_sweep(cfg)) std::cout << p.string() << '\n';
      std::cout << "config hash " << config_hash(cfg) << '\n';
      return kOk;
    }

    CostModel cm(cost);
    ArrivalPattern pattern = load_pattern(pattern_path);
    if (*opt) {
      Rational v = opt_two_sided(pattern, cm);
      std::cout << "opt " << to_string(v) << " (" << format_number(to_double(v)) << ")\n";
      if (pattern.is_one_sided()) {
        auto one = opt_one_sided(pattern, cm);
        std::cout << "one-sided opt " << to_string(one.cost) << " at x=" << one.x_star << '\n';
      }
      std::cout << "competitive bound " << format_number(competitive_bound(cm.c())) << '\n';
    } else if (*lp) {
      std::cout << lp_export(pattern, cm, parse_lp_kind(lp_kind));
    } else if (*intervals) {
      auto trace = identify_constraints(pattern);
      write_intervals_csv(std::cout, extract_intervals(trace, pattern, cm));
    } else if (*run) {
      auto p = make_policy(policy, cm, u, {theta1, theta2});
      RunResult r = run_policy(pattern, *p, cm, {drain, true});
      if (out_path.empty()) {
        write_ledger_csv(std::cout, r.ledger);
      } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        write_ledger_csv(out, r.ledger);
      }
      if (!trace_path.empty()) {
        std::ofstream out(trace_path);
        if (!out) throw std::runtime_error("cannot write " + trace_path);
        std::vector<Count> shifts;
        if (auto* s = dynamic_cast<ProposedPolicy*>(p.get())) shifts = s->stats().shift_history;
        if (auto* s = dynamic_cast<OneSidedScheduler*>(p.get())) shifts = s->stats().shift_history;
        if (auto* s = dynamic_cast<TwoSidedScheduler*>(p.get())) shifts = s->stats().shift_history;
        write_decision_trace_csv(out, r.decisions, shifts);
      }
      std::cerr << "total " << format_number(r.ledger.total()) << " coded " << r.ledger.coded << '\n';
    } else if (*pd) {
      const Slot end = drain_end(pattern, cm);
      auto dump = [&](auto&& machine) {
        for (Slot t = 1; t <= end; ++t) machine.step(t, pattern.at(t));
        machine.write_trace_csv(std::cout);
        std::cerr << "primal " << format_number(to_double(machine.primal())) << " dual "
                  << format_number(to_double(machine.dual())) << '\n';
      };
      if (exact)
        dump(TwoSidedPrimalDual<Rational>(cm, true));
      else
        dump(TwoSidedPrimalDual<double>(cm, true));
    }
    return kOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const RejectedInput& e) {
    std::cerr << "rejected input: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
}
