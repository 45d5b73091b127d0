#pragma once

// Executable property suites over random instances. Each check returns a
// named result with the number of instances examined, the number of
// violations, and a dump of the first failing instance.

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ncsched/relay_core.hpp"

namespace ncsched {

struct CheckResult {
  CheckResult() = default;
  explicit CheckResult(std::string n, Count inst = 0) : name(std::move(n)), instances(inst) {}

  std::string name;
  Count instances = 0;
  Count violations = 0;
  std::string detail;
  double seconds = 0.0;

  bool passed() const { return violations == 0 && instances > 0; }
};

// Horizon in 1..max_horizon, up to max_per_side packets per queue at uniform
// slots.
ArrivalPattern random_two_sided(std::mt19937_64& rng, Count max_per_side, Slot max_horizon);
// All Q1 packets in slot 1 (at most max_q1), Q2 packets at uniform slots.
ArrivalPattern random_one_sided(std::mt19937_64& rng, Count max_q1, Count max_q2,
                                Slot max_horizon);

std::string describe(const ArrivalPattern& pattern);

// Fixed worked instances.
CheckResult check_example_two_trajectory();
CheckResult check_example_three_optimum();
CheckResult check_example_one_lp();

CheckResult check_oracle_agreement(Count instances, std::uint64_t seed);
CheckResult check_one_sided_integrality(Count instances, std::uint64_t seed);
CheckResult check_feasibility(Count instances, std::uint64_t seed);
CheckResult check_fractional_ratio(Count instances, std::uint64_t seed);
// Bound constants at C = 2, 10 and large C.
CheckResult check_bound_constants();
CheckResult check_expected_ratio(Count draws, Count two_sided_instances, std::uint64_t seed);
CheckResult check_transmission_caps(Count instances, std::uint64_t seed);
CheckResult check_freeze(Count instances, std::uint64_t seed);

}  // namespace ncsched
