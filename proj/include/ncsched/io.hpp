#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ncsched {

// Shortest round-trip decimal form; stable across runs.
std::string format_number(double v);

std::vector<std::string> split_csv_line(std::string_view line);

// FNV-1a, 64 bit. Used to tag emitted rows with their configuration.
std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

}  // namespace ncsched
