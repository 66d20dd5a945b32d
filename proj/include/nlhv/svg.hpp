// Copyright 2026 The nlhvlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NLHV_SVG_HPP
#define NLHV_SVG_HPP

#include <string>
#include <utility>
#include <vector>

namespace nlhv {

struct SvgSeries {
  std::string label;
  std::string color;   // CSS color
  bool dashed = false;
  std::vector<std::pair<double, double>> points;
};

// Minimal deterministic line chart: axes, tick grid, legend, one
// polyline per series. The comment string, if nonempty, is embedded as
// an XML comment right after the opening tag.
std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label, const std::vector<SvgSeries>& series,
                              int width = 880, int height = 560,
                              const std::string& comment = "");

}  // namespace nlhv

#endif  // NLHV_SVG_HPP
