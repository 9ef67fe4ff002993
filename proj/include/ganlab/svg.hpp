// Copyright 2026 The ganlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <vector>

namespace ganlab::svg {

// Minimal dependency-free SVG figures: scatter clouds, line charts and
// quartile boxes. Coordinates are mapped into a fixed viewport with a thin
// axis frame; styling is deliberately plain.

struct PointSeries {
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  std::string label;
};

struct LineSeries {
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  std::string label;
};

struct Box {
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::string label;
  std::string color = "#1f77b4";
};

std::string scatter_plot(const std::vector<PointSeries>& series,
                         const std::string& title);
std::string line_plot(const std::vector<LineSeries>& series, const std::string& title,
                      const std::string& x_label, const std::string& y_label);
// One box per entry; an optional horizontal reference line (NaN = none).
std::string box_plot(const std::vector<Box>& boxes, const std::string& title,
                     double reference, const std::string& reference_label);

}  // namespace ganlab::svg
