#pragma once

// Minimal static SVG line chart, just enough to eyeball a force trace.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace mudsim::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

inline void write_line_chart(const std::string& path, const std::string& title,
                             const std::string& x_label, const std::string& y_label,
                             const std::vector<Series>& series) {
  static const char* kColors[] = {"#1f6fb4", "#d1495b", "#3a9d5d", "#866bd8", "#e3923b"};
  constexpr double width = 860, height = 520;
  constexpr double ml = 70, mr = 20, mt = 40, mb = 50;

  double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
  for (const auto& s : series) {
    for (double v : s.x) {
      x_min = std::min(x_min, v);
      x_max = std::max(x_max, v);
    }
    for (double v : s.y) {
      y_min = std::min(y_min, v);
      y_max = std::max(y_max, v);
    }
  }
  if (!(x_min < x_max)) x_max = x_min + 1.0;
  if (!(y_min < y_max)) y_max = y_min + 1.0;
  const double y_pad = 0.05 * (y_max - y_min);
  y_min -= y_pad;
  y_max += y_pad;

  auto px = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * (width - ml - mr); };
  auto py = [&](double y) { return height - mb - (y - y_min) / (y_max - y_min) * (height - mt - mb); };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return std::string(buf);
  };

  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write SVG file: " + path);
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
      << "' viewBox='0 0 " << width << " " << height << "'>\n"
      << "<rect width='100%' height='100%' fill='white'/>\n"
      << "<text x='" << width / 2 << "' y='24' text-anchor='middle' font-size='16'>" << title
      << "</text>\n";

  // Axes with min/max ticks and a zero line when visible.
  out << "<line x1='" << ml << "' y1='" << py(y_min) << "' x2='" << ml << "' y2='" << py(y_max)
      << "' stroke='black'/>\n"
      << "<line x1='" << px(x_min) << "' y1='" << height - mb << "' x2='" << px(x_max) << "' y2='"
      << height - mb << "' stroke='black'/>\n";
  if (y_min < 0.0 && y_max > 0.0) {
    out << "<line x1='" << ml << "' y1='" << py(0.0) << "' x2='" << width - mr << "' y2='"
        << py(0.0) << "' stroke='#bbbbbb' stroke-dasharray='4 4'/>\n";
  }
  out << "<text x='" << ml - 8 << "' y='" << py(y_min) << "' text-anchor='end' font-size='11'>"
      << num(y_min) << "</text>\n"
      << "<text x='" << ml - 8 << "' y='" << py(y_max) + 10 << "' text-anchor='end' font-size='11'>"
      << num(y_max) << "</text>\n"
      << "<text x='" << px(x_min) << "' y='" << height - mb + 16 << "' font-size='11'>"
      << num(x_min) << "</text>\n"
      << "<text x='" << px(x_max) << "' y='" << height - mb + 16
      << "' text-anchor='end' font-size='11'>" << num(x_max) << "</text>\n"
      << "<text x='" << width / 2 << "' y='" << height - 12
      << "' text-anchor='middle' font-size='13'>" << x_label << "</text>\n"
      << "<text x='18' y='" << height / 2 << "' text-anchor='middle' font-size='13' transform='rotate(-90 18 "
      << height / 2 << ")'>" << y_label << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kColors[s % 5];
    out << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
    for (std::size_t i = 0; i < series[s].x.size(); ++i) {
      out << num(px(series[s].x[i])) << ',' << num(py(series[s].y[i])) << ' ';
    }
    out << "'/>\n";
    out << "<text x='" << width - mr - 6 << "' y='" << mt + 16.0 * s
        << "' text-anchor='end' font-size='12' fill='" << color << "'>" << series[s].label
        << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace mudsim::svg
