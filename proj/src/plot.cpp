#include "ncsched/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "ncsched/io.hpp"

namespace ncsched {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 170, kTop = 40, kBottom = 60;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void settle() {
    if (lo > hi) lo = 0, hi = 1;
    if (hi - lo < 1e-12) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
};

}  // namespace

void write_svg(std::ostream& out, const Chart& chart) {
  Range xr, yr;
  for (const auto& s : chart.series)
    for (auto [x, y] : s.points) {
      xr.add(x);
      yr.add(y);
    }
  xr.settle();
  double pad = 0.05 * (yr.hi - yr.lo);
  yr.lo -= pad;
  yr.hi += pad;
  yr.settle();

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto sy = [&](double y) { return kTop + (1.0 - (y - yr.lo) / (yr.hi - yr.lo)) * ph; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << fixed(kLeft + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(chart.title) << "</text>\n";
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  constexpr int kTicks = 5;
  for (int i = 0; i <= kTicks; ++i) {
    double fx = xr.lo + (xr.hi - xr.lo) * i / kTicks;
    double fy = yr.lo + (yr.hi - yr.lo) * i / kTicks;
    out << "<line x1=\"" << fixed(sx(fx)) << "\" y1=\"" << fixed(kTop + ph) << "\" x2=\"" << fixed(sx(fx))
        << "\" y2=\"" << fixed(kTop + ph + 5) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fixed(sx(fx)) << "\" y=\"" << fixed(kTop + ph + 18)
        << "\" text-anchor=\"middle\">" << format_number(std::round(fx * 1000) / 1000) << "</text>\n";
    out << "<line x1=\"" << fixed(kLeft - 5) << "\" y1=\"" << fixed(sy(fy)) << "\" x2=\"" << fixed(kLeft + pw)
        << "\" y2=\"" << fixed(sy(fy)) << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << fixed(kLeft - 8) << "\" y=\"" << fixed(sy(fy) + 4) << "\" text-anchor=\"end\">"
        << fixed(fy, 3) << "</text>\n";
  }
  out << "<text x=\"" << fixed(kLeft + pw / 2) << "\" y=\"" << fixed(kHeight - 15)
      << "\" text-anchor=\"middle\">" << escape(chart.x_label) << "</text>\n";
  out << "<text x=\"18\" y=\"" << fixed(kTop + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << fixed(kTop + ph / 2) << ")\">" << escape(chart.y_label) << "</text>\n";

  for (std::size_t k = 0; k < chart.series.size(); ++k) {
    const auto& s = chart.series[k];
    const char* color = kColors[k % std::size(kColors)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    bool first = true;
    for (auto [x, y] : s.points) {
      if (!std::isfinite(y)) continue;
      out << (first ? "" : " ") << fixed(sx(x)) << ',' << fixed(sy(y));
      first = false;
    }
    out << "\"/>\n";
    for (auto [x, y] : s.points)
      if (std::isfinite(y))
        out << "<circle cx=\"" << fixed(sx(x)) << "\" cy=\"" << fixed(sy(y)) << "\" r=\"3\" fill=\"" << color
            << "\"/>\n";
    double ly = kTop + 10 + 18.0 * static_cast<double>(k);
    out << "<line x1=\"" << fixed(kLeft + pw + 12) << "\" y1=\"" << fixed(ly) << "\" x2=\""
        << fixed(kLeft + pw + 32) << "\" y2=\"" << fixed(ly) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << fixed(kLeft + pw + 38) << "\" y=\"" << fixed(ly + 4) << "\">" << escape(s.label)
        << "</text>\n";
  }
  out << "</svg>\n";
}

void write_gnuplot_blocks(std::ostream& out, const Chart& chart) {
  out << "# " << chart.title << "\n# columns: " << chart.x_label << ' ' << chart.y_label << '\n';
  for (std::size_t k = 0; k < chart.series.size(); ++k) {
    if (k) out << "\n\n";
    out << "# " << chart.series[k].label << '\n';
    for (auto [x, y] : chart.series[k].points) out << format_number(x) << ' ' << format_number(y) << '\n';
  }
}

}  // namespace ncsched
