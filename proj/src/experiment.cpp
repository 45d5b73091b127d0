#include "ncsched/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "ncsched/baselines.hpp"
#include "ncsched/io.hpp"
#include "ncsched/netsim.hpp"
#include "ncsched/offline_oracle.hpp"
#include "ncsched/plot.hpp"
#include "ncsched/primal_dual.hpp"
#include "ncsched/randomized_scheduler.hpp"

namespace ncsched {

using nlohmann::json;

namespace {

const std::map<std::string, ExperimentKind>& kinds() {
  static const std::map<std::string, ExperimentKind> m{
      {"verify", ExperimentKind::Verify},
      {"single-relay-sweep", ExperimentKind::SingleRelaySweep},
      {"line-network-sweep", ExperimentKind::LineNetworkSweep},
      {"ski-rental-sweep", ExperimentKind::SkiRentalSweep},
      {"golden-examples", ExperimentKind::GoldenExamples},
  };
  return m;
}

template <typename T>
T scalar(const json& v, const std::string& key) {
  try {
    if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) throw ConfigError(key + ": expected a number");
      return v.get<double>();
    } else {
      if (!v.is_number_integer()) throw ConfigError(key + ": expected an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (v.is_number_unsigned() || v.get<std::int64_t>() >= 0) return v.get<T>();
        throw ConfigError(key + ": expected a non-negative integer");
      } else {
        return v.get<T>();
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

template <typename T>
std::vector<T> grid(const json& v, const std::string& key) {
  std::vector<T> out;
  if (v.is_array()) {
    for (const auto& e : v) out.push_back(scalar<T>(e, key));
  } else {
    out.push_back(scalar<T>(v, key));
  }
  return out;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

std::string kind_name(ExperimentKind kind) {
  for (const auto& [name, k] : kinds())
    if (k == kind) return name;
  return "unknown";
}

ExperimentKind parse_kind(const std::string& name) {
  auto it = kinds().find(name);
  if (it == kinds().end()) throw ConfigError("unknown experiment kind '" + name + "'");
  return it->second;
}

ExperimentConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  require(doc.is_object(), "config must be a JSON object");
  require(doc.contains("seed"), "config must set a seed");

  ExperimentConfig cfg;
  for (const auto& [key, v] : doc.items()) {
    if (key == "experiment") {
      require(v.is_string(), "experiment: expected a string");
      cfg.kind = parse_kind(v.get<std::string>());
    } else if (key == "costs") {
      cfg.costs = grid<double>(v, key);
    } else if (key == "p1") {
      cfg.p1 = scalar<double>(v, key);
    } else if (key == "p2") {
      cfg.p2 = grid<double>(v, key);
    } else if (key == "sigma2") {
      cfg.sigma2 = grid<double>(v, key);
    } else if (key == "relays") {
      cfg.relays = grid<Count>(v, key);
    } else if (key == "first_relay_cost") {
      if (!v.is_null()) cfg.first_relay_cost = scalar<double>(v, key);
    } else if (key == "horizon") {
      cfg.horizon = scalar<Slot>(v, key);
    } else if (key == "replications") {
      cfg.replications = scalar<Count>(v, key);
    } else if (key == "seed") {
      cfg.seed = scalar<std::uint64_t>(v, key);
    } else if (key == "out") {
      require(v.is_string(), "out: expected a string");
      cfg.out_dir = v.get<std::string>();
    } else if (key == "max_threshold") {
      cfg.max_threshold = v.is_null() ? -1 : scalar<Count>(v, key);
    } else if (key == "draws") {
      cfg.draws = scalar<Count>(v, key);
    } else if (key == "instances") {
      cfg.instances = scalar<Count>(v, key);
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

void validate(const ExperimentConfig& cfg) {
  auto prob = [](double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; };
  auto cost = [](double c) { return std::isfinite(c) && c > 1.0; };
  require(!cfg.costs.empty() && !cfg.p2.empty() && !cfg.sigma2.empty() && !cfg.relays.empty(),
          "grids must be non-empty");
  for (double c : cfg.costs) require(cost(c), "costs must be finite and greater than 1");
  if (cfg.first_relay_cost) require(cost(*cfg.first_relay_cost), "first_relay_cost must exceed 1");
  require(prob(cfg.p1), "p1 must lie in [0,1]");
  for (double p : cfg.p2) require(prob(p), "p2 values must lie in [0,1]");
  for (double s : cfg.sigma2) require(std::isfinite(s) && s >= 0.0, "sigma2 values must be non-negative");
  for (Count r : cfg.relays) require(r >= 1 && r <= 64, "relays must lie in 1..64");
  require(cfg.horizon >= 1, "horizon must be at least 1");
  require(cfg.replications >= 1, "replications must be at least 1");
  require(cfg.max_threshold >= -1, "max_threshold must be -1 or non-negative");
  require(cfg.draws >= 1, "draws must be at least 1");
  require(cfg.instances >= 1, "instances must be at least 1");
}

std::string canonical_json(const ExperimentConfig& cfg) {
  json j;
  j["experiment"] = kind_name(cfg.kind);
  j["costs"] = cfg.costs;
  j["p1"] = cfg.p1;
  j["p2"] = cfg.p2;
  j["sigma2"] = cfg.sigma2;
  j["relays"] = cfg.relays;
  j["first_relay_cost"] = cfg.first_relay_cost ? json(*cfg.first_relay_cost) : json(nullptr);
  j["horizon"] = cfg.horizon;
  j["replications"] = cfg.replications;
  j["seed"] = cfg.seed;
  j["max_threshold"] = cfg.max_threshold;
  j["draws"] = cfg.draws;
  j["instances"] = cfg.instances;
  return j.dump();
}

std::string config_hash(const ExperimentConfig& cfg) { return hex64(fnv1a64(canonical_json(cfg))); }

std::string format_row(const ResultRow& r) {
  std::ostringstream out;
  out << format_number(r.p2) << ',' << format_number(r.c) << ',' << r.policy << ','
      << format_number(r.mean_cost) << ',' << format_number(r.mean_ratio) << ','
      << format_number(r.coded_count) << ',' << r.seed_base << ',' << format_number(r.sigma2) << ','
      << r.relays << ',' << r.config_hash;
  return out.str();
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  std::size_t workers = std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

namespace {

double ratio_of_means(double num, double den) {
  if (den <= 0.0) return num <= 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return num / den;
}

struct GridPoint {
  double c;
  double p2;
  double sigma2;
  Count relays;
};

TrafficSpec traffic(const ExperimentConfig& cfg, const GridPoint& g) {
  TrafficSpec spec;
  spec.p1 = cfg.p1;
  spec.p2 = g.p2;
  spec.sigma2 = g.sigma2;
  spec.horizon = cfg.horizon;
  return spec;
}

ResultRow make_row(const ExperimentConfig& cfg, const GridPoint& g, const std::string& hash,
                   const PolicySummary& s, double proposed_mean) {
  ResultRow row;
  row.p2 = g.p2;
  row.c = g.c;
  row.policy = policy_name(s.kind);
  row.mean_cost = s.mean_cost();
  row.mean_ratio = s.kind == PolicyKind::Proposed ? 1.0 : ratio_of_means(proposed_mean, row.mean_cost);
  row.coded_count = s.mean_coded();
  row.seed_base = cfg.seed;
  row.sigma2 = g.sigma2;
  row.relays = g.relays;
  row.config_hash = hash;
  return row;
}

}  // namespace

std::vector<ResultRow> single_relay_sweep(const ExperimentConfig& cfg) {
  validate(cfg);
  std::vector<GridPoint> points;
  for (double s : cfg.sigma2)
    for (double c : cfg.costs)
      for (double p2 : cfg.p2) points.push_back({c, p2, s, 1});
  const std::string hash = config_hash(cfg);
  std::vector<std::vector<ResultRow>> rows(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    const GridPoint& g = points[i];
    auto res = run_single_relay(traffic(cfg, g), CostModel(g.c), cfg.replications, cfg.seed, cfg.max_threshold);
    double prop = res.proposed.mean_cost();
    rows[i] = {make_row(cfg, g, hash, res.proposed, prop), make_row(cfg, g, hash, res.optimized, prop),
               make_row(cfg, g, hash, res.c_threshold, prop)};
  });
  std::vector<ResultRow> out;
  for (auto& r : rows) out.insert(out.end(), r.begin(), r.end());
  return out;
}

std::vector<ResultRow> line_network_sweep(const ExperimentConfig& cfg) {
  validate(cfg);
  std::vector<GridPoint> points;
  for (double s : cfg.sigma2)
    for (double c : cfg.costs)
      for (double p2 : cfg.p2)
        for (Count r : cfg.relays) points.push_back({c, p2, s, r});
  const std::string hash = config_hash(cfg);
  std::vector<std::vector<ResultRow>> rows(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    const GridPoint& g = points[i];
    std::vector<CostModel> costs(static_cast<std::size_t>(g.relays), CostModel(g.c));
    if (cfg.first_relay_cost) costs[0] = CostModel(*cfg.first_relay_cost);
    auto res = run_line_network_sweep_point(traffic(cfg, g), costs, cfg.replications, cfg.seed,
                                            cfg.max_threshold);
    double prop = res.proposed.mean_cost();
    rows[i] = {make_row(cfg, g, hash, res.proposed, prop), make_row(cfg, g, hash, res.sub_optimized, prop)};
  });
  std::vector<ResultRow> out;
  for (auto& r : rows) out.insert(out.end(), r.begin(), r.end());
  return out;
}

std::vector<SkiRow> ski_rental_sweep(const ExperimentConfig& cfg) {
  validate(cfg);
  struct Point {
    double c;
    Slot last_day;
  };
  std::vector<Point> points;
  for (double c : cfg.costs) {
    const Slot last = static_cast<Slot>(std::ceil(3 * c));
    for (Slot t = 1; t <= last; ++t) points.push_back({c, t});
  }
  const std::string hash = config_hash(cfg);
  std::vector<SkiRow> rows(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    const Point& pt = points[i];
    CostModel cm(pt.c);
    auto pattern = ski_rental_adapter(pt.last_day);
    double opt = to_double(opt_one_sided(pattern, cm).cost);
    auto seeder = replication_rng(cfg.seed, i, 2);
    auto er = expected_ratio(
        pattern, [&](double u) { return std::make_unique<OneSidedScheduler>(cm, u); }, cm, opt, cfg.draws,
        seeder());
    SkiRow& row = rows[i];
    row.last_day = pt.last_day;
    row.c = pt.c;
    row.mean_reduced_cost = er.mean_reduced_cost;
    row.opt = opt;
    row.mean_ratio = er.ratio;
    row.bound = competitive_bound(pt.c);
    row.seed_base = cfg.seed;
    row.config_hash = hash;
  });
  return rows;
}

namespace {

std::filesystem::path open_out(const ExperimentConfig& cfg, const std::string& name, std::ofstream& out) {
  std::filesystem::path path = std::filesystem::path(cfg.out_dir) / name;
  out.open(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return path;
}

struct Writer {
  const ExperimentConfig& cfg;
  std::vector<std::filesystem::path> written;

  template <typename Fn>
  void file(const std::string& name, Fn&& body) {
    std::ofstream out;
    auto path = open_out(cfg, name, out);
    body(out);
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + path.string());
    written.push_back(path);
  }

  void chart(const std::string& stem, const Chart& c) {
    file(stem + ".dat", [&](std::ostream& o) { write_gnuplot_blocks(o, c); });
    file(stem + ".svg", [&](std::ostream& o) { write_svg(o, c); });
  }

  void rows(const std::string& name, const std::vector<ResultRow>& rows) {
    file(name, [&](std::ostream& o) {
      o << kResultHeader << '\n';
      for (const auto& r : rows) o << format_row(r) << '\n';
    });
  }
};

std::string cost_label(double c) { return "C=" + format_number(c); }

void single_relay_figures(Writer& w, const ExperimentConfig& cfg, const std::vector<ResultRow>& rows) {
  for (double s : cfg.sigma2) {
    const std::string tag = format_number(s);
    Chart ratio{"Proposed vs threshold policies, p1=" + format_number(cfg.p1) + ", sigma2=" + tag, "p2",
                "cost ratio", {}};
    Chart coded{"Coded packets per run, sigma2=" + tag, "p2", "coded packets", {}};
    for (double c : cfg.costs) {
      for (const char* pol : {"optimized-threshold", "c-threshold"}) {
        Series sr{cost_label(c) + " vs " + pol, {}};
        for (const auto& r : rows)
          if (r.sigma2 == s && r.c == c && r.policy == pol) sr.points.emplace_back(r.p2, r.mean_ratio);
        ratio.series.push_back(std::move(sr));
      }
      for (const char* pol : {"proposed", "optimized-threshold", "c-threshold"}) {
        Series sc{cost_label(c) + " " + pol, {}};
        for (const auto& r : rows)
          if (r.sigma2 == s && r.c == c && r.policy == pol) sc.points.emplace_back(r.p2, r.coded_count);
        coded.series.push_back(std::move(sc));
      }
    }
    w.chart("fig2_sigma" + tag, ratio);
    w.chart("fig3_coded_sigma" + tag, coded);
  }
}

void line_network_figures(Writer& w, const ExperimentConfig& cfg, const std::vector<ResultRow>& rows) {
  const bool by_relays = cfg.relays.size() > 1;
  Chart chart{"Line network: proposed vs sub-optimized threshold", by_relays ? "relays" : "p2", "cost ratio", {}};
  for (double s : cfg.sigma2)
    for (double c : cfg.costs) {
      if (by_relays) {
        for (double p2 : cfg.p2) {
          Series sr{cost_label(c) + " p2=" + format_number(p2) + " sigma2=" + format_number(s), {}};
          for (const auto& r : rows)
            if (r.sigma2 == s && r.c == c && r.p2 == p2 && r.policy == "sub-optimized-threshold")
              sr.points.emplace_back(static_cast<double>(r.relays), r.mean_ratio);
          chart.series.push_back(std::move(sr));
        }
      } else {
        Series sr{cost_label(c) + " sigma2=" + format_number(s), {}};
        for (const auto& r : rows)
          if (r.sigma2 == s && r.c == c && r.policy == "sub-optimized-threshold")
            sr.points.emplace_back(r.p2, r.mean_ratio);
        chart.series.push_back(std::move(sr));
      }
    }
  w.chart("fig4", chart);
}

}  // namespace

std::vector<std::filesystem::path> run_sweep(const ExperimentConfig& cfg) {
  validate(cfg);
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw std::runtime_error("cannot create " + cfg.out_dir + ": " + ec.message());
  Writer w{cfg, {}};
  w.file("config.json", [&](std::ostream& o) { o << canonical_json(cfg) << '\n'; });

  switch (cfg.kind) {
    case ExperimentKind::SingleRelaySweep: {
      auto rows = single_relay_sweep(cfg);
      w.rows("single_relay.csv", rows);
      single_relay_figures(w, cfg, rows);
      break;
    }
    case ExperimentKind::LineNetworkSweep: {
      auto rows = line_network_sweep(cfg);
      w.rows("line_network.csv", rows);
      line_network_figures(w, cfg, rows);
      break;
    }
    case ExperimentKind::SkiRentalSweep: {
      auto rows = ski_rental_sweep(cfg);
      w.file("ski_rental.csv", [&](std::ostream& o) {
        o << kSkiHeader << '\n';
        for (const auto& r : rows)
          o << r.last_day << ',' << format_number(r.c) << ',' << format_number(r.mean_reduced_cost) << ','
            << format_number(r.opt) << ',' << format_number(r.mean_ratio) << ',' << format_number(r.bound)
            << ',' << r.seed_base << ',' << r.config_hash << '\n';
      });
      Chart chart{"Ski rental: expected reduced cost over optimum", "T", "ratio", {}};
      for (double c : cfg.costs) {
        Series sr{cost_label(c), {}}, sb{cost_label(c) + " bound", {}};
        for (const auto& r : rows)
          if (r.c == c) {
            sr.points.emplace_back(static_cast<double>(r.last_day), r.mean_ratio);
            sb.points.emplace_back(static_cast<double>(r.last_day), r.bound);
          }
        chart.series.push_back(std::move(sr));
        chart.series.push_back(std::move(sb));
      }
      w.chart("ski_rental", chart);
      break;
    }
    case ExperimentKind::Verify:
    case ExperimentKind::GoldenExamples:
      throw ConfigError("'" + kind_name(cfg.kind) + "' is not a sweep");
  }
  return w.written;
}

std::vector<CheckResult> run_golden() {
  return {check_example_two_trajectory(), check_example_three_optimum(), check_example_one_lp()};
}

std::vector<CheckResult> run_verify(Count instances, Count draws, std::uint64_t seed) {
  std::vector<CheckResult> out = run_golden();
  out.push_back(check_oracle_agreement(instances, seed));
  out.push_back(check_one_sided_integrality(instances, seed + 1));
  out.push_back(check_feasibility(instances, seed + 2));
  out.push_back(check_fractional_ratio(instances, seed + 3));
  out.push_back(check_bound_constants());
  out.push_back(check_expected_ratio(draws, std::max<Count>(1, instances / 100), seed + 4));
  out.push_back(check_transmission_caps(instances, seed + 5));
  out.push_back(check_freeze(instances, seed + 6));
  return out;
}

}  // namespace ncsched
