// Copyright 2026 The wbpose Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wbpose/svg_plot.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace wbpose {

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 400;
constexpr double kLeft = 70;
constexpr double kRight = 20;
constexpr double kTop = 40;
constexpr double kBottom = 50;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                               "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};

std::string Escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string Num(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

struct Frame {
  double x0, x1, y0, y1;
  double Px(double x) const {
    return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight);
  }
  double Py(double y) const {
    return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom);
  }
};

void Widen(double& lo, double& hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    lo = 0.0;
    hi = 1.0;
  }
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
  }
}

void Header(std::ostringstream& os, const std::string& title) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
     << "\" height=\"" << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
     << Escape(title) << "</text>\n";
}

void Axes(std::ostringstream& os, const Frame& f, const std::string& xlabel,
          const std::string& ylabel) {
  const double bx = kLeft;
  const double by = kHeight - kBottom;
  os << "<line x1=\"" << bx << "\" y1=\"" << by << "\" x2=\"" << kWidth - kRight
     << "\" y2=\"" << by << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << bx << "\" y1=\"" << by << "\" x2=\"" << bx << "\" y2=\"" << kTop
     << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = f.x0 + (f.x1 - f.x0) * i / 4.0;
    const double yv = f.y0 + (f.y1 - f.y0) * i / 4.0;
    os << "<text x=\"" << f.Px(xv) << "\" y=\"" << by + 16 << "\" text-anchor=\"middle\">"
       << Num(xv) << "</text>\n";
    os << "<text x=\"" << bx - 6 << "\" y=\"" << f.Py(yv) + 4 << "\" text-anchor=\"end\">"
       << Num(yv) << "</text>\n";
  }
  os << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 12
     << "\" text-anchor=\"middle\">" << Escape(xlabel) << "</text>\n";
  os << "<text x=\"16\" y=\"" << (kTop + by) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << (kTop + by) / 2 << ")\">" << Escape(ylabel) << "</text>\n";
}

void Legend(std::ostringstream& os, const std::vector<Series>& series) {
  for (size_t i = 0; i < series.size(); ++i) {
    const double y = kTop + 14 * i;
    os << "<rect x=\"" << kWidth - kRight - 150 << "\" y=\"" << y << "\" width=\"10\" height=\"10\" fill=\""
       << kColors[i % 8] << "\"/>\n";
    os << "<text x=\"" << kWidth - kRight - 135 << "\" y=\"" << y + 9 << "\">"
       << Escape(series[i].name) << "</text>\n";
  }
}

}  // namespace

std::string HistogramSvg(const std::vector<Series>& samples, int bins,
                         const std::string& title, const std::string& xlabel) {
  bins = std::max(1, bins);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& s : samples) {
    for (double v : s.y) {
      if (!std::isfinite(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  Widen(lo, hi);
  std::vector<std::vector<int>> counts(samples.size(), std::vector<int>(bins, 0));
  int peak = 1;
  for (size_t k = 0; k < samples.size(); ++k) {
    for (double v : samples[k].y) {
      if (!std::isfinite(v)) continue;
      int b = static_cast<int>((v - lo) / (hi - lo) * bins);
      b = std::clamp(b, 0, bins - 1);
      peak = std::max(peak, ++counts[k][b]);
    }
  }
  Frame f{lo, hi, 0.0, static_cast<double>(peak)};
  std::ostringstream os;
  Header(os, title);
  Axes(os, f, xlabel, "count");
  const double bw = (hi - lo) / bins;
  for (size_t k = 0; k < samples.size(); ++k) {
    for (int b = 0; b < bins; ++b) {
      if (counts[k][b] == 0) continue;
      const double x0 = f.Px(lo + b * bw);
      const double x1 = f.Px(lo + (b + 1) * bw);
      const double y = f.Py(counts[k][b]);
      os << "<rect x=\"" << x0 << "\" y=\"" << y << "\" width=\"" << std::max(0.5, x1 - x0 - 0.5)
         << "\" height=\"" << f.Py(0) - y << "\" fill=\"" << kColors[k % 8]
         << "\" fill-opacity=\"0.5\"/>\n";
    }
  }
  Legend(os, samples);
  os << "</svg>\n";
  return os.str();
}

std::string LinePlotSvg(const std::vector<Series>& series, const std::string& title,
                        const std::string& xlabel, const std::string& ylabel) {
  double x0 = std::numeric_limits<double>::infinity();
  double x1 = -x0;
  double y0 = x0;
  double y1 = -x0;
  for (const auto& s : series) {
    for (size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  }
  Widen(x0, x1);
  Widen(y0, y1);
  Frame f{x0, x1, y0, y1};
  std::ostringstream os;
  Header(os, title);
  Axes(os, f, xlabel, ylabel);
  for (size_t k = 0; k < series.size(); ++k) {
    os << "<polyline fill=\"none\" stroke=\"" << kColors[k % 8] << "\" stroke-width=\"1.2\" points=\"";
    const auto& s = series[k];
    for (size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      os << f.Px(s.x[i]) << "," << f.Py(s.y[i]) << " ";
    }
    os << "\"/>\n";
  }
  Legend(os, series);
  os << "</svg>\n";
  return os.str();
}

std::string BarChartSvg(const std::vector<std::string>& labels,
                        const std::vector<double>& values, const std::string& title,
                        const std::string& ylabel) {
  const size_t n = std::min(labels.size(), values.size());
  double hi = 0.0;
  for (size_t i = 0; i < n; ++i) hi = std::max(hi, values[i]);
  if (hi <= 0.0) hi = 1.0;
  Frame f{0.0, static_cast<double>(std::max<size_t>(1, n)), 0.0, hi};
  std::ostringstream os;
  Header(os, title);
  Axes(os, f, "", ylabel);
  for (size_t i = 0; i < n; ++i) {
    const double x0 = f.Px(i + 0.15);
    const double x1 = f.Px(i + 0.85);
    const double y = f.Py(std::max(0.0, values[i]));
    os << "<rect x=\"" << x0 << "\" y=\"" << y << "\" width=\"" << x1 - x0 << "\" height=\""
       << f.Py(0) - y << "\" fill=\"" << kColors[0] << "\"/>\n";
    os << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << y - 4 << "\" text-anchor=\"middle\">"
       << Escape(labels[i]) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace wbpose
