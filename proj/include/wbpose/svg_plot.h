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

#ifndef WBPOSE_SVG_PLOT_H_
#define WBPOSE_SVG_PLOT_H_

#include <string>
#include <vector>

namespace wbpose {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

// Histograms of one or more sample sets over a shared range. Samples are
// taken from each series' `y`; `x` is ignored.
std::string HistogramSvg(const std::vector<Series>& samples, int bins,
                         const std::string& title, const std::string& xlabel);

std::string LinePlotSvg(const std::vector<Series>& series,
                        const std::string& title, const std::string& xlabel,
                        const std::string& ylabel);

// Bar chart with one bar per label.
std::string BarChartSvg(const std::vector<std::string>& labels,
                        const std::vector<double>& values,
                        const std::string& title, const std::string& ylabel);

}  // namespace wbpose

#endif  // WBPOSE_SVG_PLOT_H_
