#pragma once

// Experiment configuration and the sweeps behind the command-line runner.
// Every sweep is a pure function of its configuration: identical configs
// produce byte-identical files.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ncsched/checks.hpp"
#include "ncsched/relay_core.hpp"

namespace ncsched {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind { Verify, SingleRelaySweep, LineNetworkSweep, SkiRentalSweep, GoldenExamples };

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::SingleRelaySweep;
  std::vector<double> costs{5.0, 10.0, 15.0};
  double p1 = 0.5;
  std::vector<double> p2{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<double> sigma2{0.0};
  std::vector<Count> relays{2};
  // Line networks: relay 1 uses this cost and the others the grid cost.
  std::optional<double> first_relay_cost;
  Slot horizon = 10000;
  Count replications = 20;
  std::uint64_t seed = 1;
  std::string out_dir = "results";
  Count max_threshold = -1;  // -1: ceil(C)
  Count draws = 10000;       // ski-rental Monte-Carlo draws
  Count instances = 2000;    // random instances per verify suite
};

// Parses a JSON document; unknown keys and malformed values raise ConfigError.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
// Checks the grids and ranges; raises ConfigError.
void validate(const ExperimentConfig& cfg);

std::string kind_name(ExperimentKind kind);
ExperimentKind parse_kind(const std::string& name);

// Canonical JSON form and its FNV-1a hash (16 hex digits).
std::string canonical_json(const ExperimentConfig& cfg);
std::string config_hash(const ExperimentConfig& cfg);

struct ResultRow {
  double p2 = 0.0;
  double c = 0.0;
  std::string policy;
  double mean_cost = 0.0;
  double mean_ratio = 0.0;
  double coded_count = 0.0;
  std::uint64_t seed_base = 0;
  double sigma2 = 0.0;
  Count relays = 1;
  std::string config_hash;
};

inline constexpr const char* kResultHeader =
    "p2,C,policy,mean_cost,mean_ratio,coded_count,seed_base,sigma2,relays,config_hash";

std::string format_row(const ResultRow& row);

struct SkiRow {
  Slot last_day = 0;
  double c = 0.0;
  double mean_reduced_cost = 0.0;
  double opt = 0.0;
  double mean_ratio = 0.0;
  double bound = 0.0;
  std::uint64_t seed_base = 0;
  std::string config_hash;
};

inline constexpr const char* kSkiHeader = "T,C,mean_reduced_cost,opt,mean_ratio,bound,seed_base,config_hash";

std::vector<ResultRow> single_relay_sweep(const ExperimentConfig& cfg);
std::vector<ResultRow> line_network_sweep(const ExperimentConfig& cfg);
std::vector<SkiRow> ski_rental_sweep(const ExperimentConfig& cfg);

// Runs the sweep the config names and writes its CSV, gnuplot data and SVG
// files under cfg.out_dir. Returns the written paths in order.
std::vector<std::filesystem::path> run_sweep(const ExperimentConfig& cfg);

// Property suites with the given sizes; golden runs only the worked instances.
std::vector<CheckResult> run_verify(Count instances, Count draws, std::uint64_t seed);
std::vector<CheckResult> run_golden();

// Runs fn(0..n-1) on a small thread pool; results keep index order.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace ncsched
