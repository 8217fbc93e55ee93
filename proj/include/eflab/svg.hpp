// Copyright 2026 The ef-lab Authors. All Rights Reserved.
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
// =============================================================================
#pragma once

#include <string>
#include <vector>

namespace eflab {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotOptions {
  std::string title;
  std::string x_label = "t";
  std::string y_label;
  bool log_y = false;
  int width = 640;
  int height = 420;
};

/// Minimal standalone SVG line plot with axes and a legend. Non-positive
/// values are dropped on a log axis.
std::string render_line_plot(const std::vector<PlotSeries>& series, const PlotOptions& opt);

}  // namespace eflab
