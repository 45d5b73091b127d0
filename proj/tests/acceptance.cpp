// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ncsched/baselines.hpp"
#include "ncsched/checks.hpp"
#include "ncsched/experiment.hpp"
#include "ncsched/io.hpp"
#include "ncsched/netsim.hpp"
#include "ncsched/primal_dual.hpp"

using namespace ncsched;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body) {
  auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!o.pass) ++failures;
  std::printf("%s  %2d  %-58s %8.2fs  %s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), secs, o.detail.c_str());
  std::fflush(stdout);
}

Outcome from_checks(std::initializer_list<CheckResult> results) {
  Outcome o{true, ""};
  for (const auto& r : results) {
    o.pass = o.pass && r.passed();
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += std::to_string(r.instances) + " inst, " + std::to_string(r.violations) + " viol";
    if (!r.passed() && !r.detail.empty()) o.detail += " [" + r.detail + "]";
  }
  return o;
}

Outcome timed_golden(CheckResult (*fn)()) {
  CheckResult r = fn();
  Outcome o = from_checks({r});
  double ms = r.seconds * 1e3;
  o.detail += ", " + format_number(std::round(ms * 1000) / 1000) + " ms";
  if (ms >= 1.0) {
    o.pass = false;
    o.detail += " (over 1 ms)";
  }
  return o;
}

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

double sample_sd(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = 0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

// Mean of a - b and its standard error over paired replications.
std::pair<double, double> paired(const PolicySummary& a, const PolicySummary& b) {
  std::vector<double> d;
  for (std::size_t i = 0; i < a.reps.size(); ++i)
    d.push_back(static_cast<double>(a.reps[i].coded - b.reps[i].coded));
  double m = 0;
  for (double x : d) m += x;
  m /= static_cast<double>(d.size());
  return {m, sample_sd(d) / std::sqrt(static_cast<double>(d.size()))};
}

struct SweepPoint {
  double c, p2;
  SingleRelayResult res;
};

std::vector<SweepPoint> single_relay_grid() {
  std::vector<SweepPoint> pts;
  for (double c : {5.0, 10.0, 15.0})
    for (int k = 1; k <= 9; ++k) pts.push_back({c, k / 10.0, {}});
  parallel_for(pts.size(), [&](std::size_t i) {
    TrafficSpec spec{0.5, pts[i].p2, 0.0, 10000};
    pts[i].res = run_single_relay(spec, CostModel(pts[i].c), 20, 1);
  });
  return pts;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int main() {
  constexpr Count kInstances = 10000;
  constexpr Count kDraws = 10000;

  report(1, "golden: two-packet trajectory, C=2", [] { return timed_golden(check_example_two_trajectory); });
  report(2, "golden: offline optimum 5, C=4", [] { return timed_golden(check_example_three_optimum); });
  report(3, "closed-form optimum equals brute force",
         [&] { return from_checks({check_oracle_agreement(kInstances, 101)}); });
  report(4, "one-sided LP has no integrality gap",
         [&] { return from_checks({check_one_sided_integrality(kInstances, 202)}); });
  report(5, "primal and dual feasibility", [&] { return from_checks({check_feasibility(kInstances, 303)}); });
  report(6, "fractional primal within (1+1/theta) OPT", [&] {
    Outcome o = from_checks({check_fractional_ratio(kInstances, 404), check_bound_constants()});
    o.detail += ", bound(2)=" + to_string(competitive_bound_exact(2.0)) + " bound(10)=" +
                fixed(competitive_bound(10.0), 6);
    return o;
  });
  report(7, "expected ratio within bound + 0.02", [&] {
    CheckResult r = check_expected_ratio(kDraws, 60, 505);
    Outcome o = from_checks({r});
    o.detail += ", " + r.detail;
    return o;
  });
  report(8, "per-slot transmission caps and freeze", [&] {
    return from_checks({check_transmission_caps(kInstances, 606), check_freeze(kInstances, 707)});
  });

  std::vector<SweepPoint> grid;
  report(9, "single relay: proposed vs optimized threshold <= 1.45", [&] {
    grid = single_relay_grid();
    double worst = 0;
    std::string where, bad;
    for (const auto& g : grid) {
      double prop = g.res.proposed.mean_cost();
      double ratio = prop / g.res.optimized.mean_cost();
      if (ratio > worst) {
        worst = ratio;
        where = "C=" + format_number(g.c) + " p2=" + format_number(g.p2);
      }
      if (ratio > 1.45) bad += " ratio@C=" + format_number(g.c) + ",p2=" + format_number(g.p2);
      if (g.p2 <= 0.3 + 1e-12 && !(prop < g.res.c_threshold.mean_cost()))
        bad += " c-threshold@C=" + format_number(g.c) + ",p2=" + format_number(g.p2);
    }
    return Outcome{bad.empty(), "worst " + fixed(worst) + " at " + where + (bad.empty() ? "" : ";" + bad)};
  });

  report(10, "coded counts: proposed <= optimized <= C-threshold", [&] {
    if (grid.empty()) grid = single_relay_grid();
    int violations = 0;
    std::string first;
    double worst_z = -1e300;
    for (const auto& g : grid) {
      auto check = [&](const PolicySummary& lo, const PolicySummary& hi, const char* what) {
        auto [m, se] = paired(lo, hi);
        double z = se > 0 ? m / se : (m > 0 ? 1e300 : 0.0);
        worst_z = std::max(worst_z, z);
        if (m > 2 * se) {
          ++violations;
          if (first.empty())
            first = std::string(what) + " at C=" + format_number(g.c) + " p2=" + format_number(g.p2) + " (" +
                    fixed(lo.mean_coded(), 1) + " vs " + fixed(hi.mean_coded(), 1) + ")";
        }
      };
      check(g.res.proposed, g.res.optimized, "proposed > optimized");
      check(g.res.optimized, g.res.c_threshold, "optimized > C-threshold");
    }
    return Outcome{violations == 0, std::to_string(violations) + " of " + std::to_string(2 * grid.size()) +
                                        " orderings violated" + (first.empty() ? "" : ", first: " + first)};
  });

  report(11, "line network ratio flat in R (spread <= 0.15)", [&] {
    struct Pt {
      double p2;
      Count relays;
      double ratio = 0;
    };
    std::vector<Pt> pts;
    for (double p2 : {0.1, 0.9})
      for (Count r = 2; r <= 6; ++r) pts.push_back({p2, r});
    parallel_for(pts.size(), [&](std::size_t i) {
      TrafficSpec spec{0.5, pts[i].p2, 0.0, 10000};
      std::vector<CostModel> costs(static_cast<std::size_t>(pts[i].relays), CostModel(5));
      auto s = run_line_network_sweep_point(spec, costs, 20, 1);
      pts[i].ratio = s.proposed.mean_cost() / s.sub_optimized.mean_cost();
    });
    bool ok = true;
    std::string detail;
    for (double p2 : {0.1, 0.9}) {
      double lo = 1e300, hi = -1e300;
      for (const auto& p : pts)
        if (p.p2 == p2) {
          lo = std::min(lo, p.ratio);
          hi = std::max(hi, p.ratio);
        }
      ok = ok && hi - lo <= 0.15;
      detail += (detail.empty() ? "" : "; ") + std::string("p2=") + format_number(p2) + " ratios " + fixed(lo) +
                ".." + fixed(hi) + " spread " + fixed(hi - lo);
    }
    return Outcome{ok, detail};
  });

  report(12, "identical config and seed give identical bytes", [&] {
    auto base = fs::temp_directory_path() / "ncsched_acceptance";
    fs::remove_all(base);
    std::size_t files = 0;
    bool same = true;
    for (ExperimentKind kind :
         {ExperimentKind::SingleRelaySweep, ExperimentKind::LineNetworkSweep, ExperimentKind::SkiRentalSweep}) {
      ExperimentConfig cfg;
      cfg.kind = kind;
      cfg.costs = {3, 5};
      cfg.p2 = {0.2, 0.6};
      cfg.sigma2 = {0, 1};
      cfg.relays = {2, 3};
      cfg.horizon = 1000;
      cfg.replications = 3;
      cfg.draws = 300;
      cfg.seed = 12;
      cfg.out_dir = (base / (kind_name(kind) + "_a")).string();
      auto a = run_sweep(cfg);
      cfg.out_dir = (base / (kind_name(kind) + "_b")).string();
      auto b = run_sweep(cfg);
      same = same && a.size() == b.size();
      for (std::size_t i = 0; same && i < a.size(); ++i) same = slurp(a[i]) == slurp(b[i]) && !slurp(a[i]).empty();
      files += a.size();
    }
    fs::remove_all(base);
    return Outcome{same, std::to_string(files) + " files compared"};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
