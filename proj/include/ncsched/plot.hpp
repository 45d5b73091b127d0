#pragma once

// Static line charts and gnuplot data blocks for sweep results.

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace ncsched {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

void write_svg(std::ostream& out, const Chart& chart);

// One data block per series, separated by two blank lines (gnuplot `index`).
void write_gnuplot_blocks(std::ostream& out, const Chart& chart);

}  // namespace ncsched
