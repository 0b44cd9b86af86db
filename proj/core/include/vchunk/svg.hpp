// Copyright 2026 The vchunk Authors.
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

#ifndef VCHUNK_SVG_HPP
#define VCHUNK_SVG_HPP

#include <string>
#include <utility>
#include <vector>

namespace vchunk {

inline constexpr int kSvgWidth = 800;
inline constexpr int kSvgHeight = 500;

struct Series {
    std::string name;
    std::vector<double> values;
};

/// Line chart of each series against x = 1..n on a fixed 800x500 canvas.
std::string svg_line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                           const std::vector<Series>& series);

/// Vertical bar chart, one bar per (label, value).
std::string svg_bar_chart(const std::string& title, const std::string& y_label,
                          const std::vector<std::pair<std::string, double>>& bars);

std::string xml_escape(const std::string& text);

}  // namespace vchunk

#endif  // VCHUNK_SVG_HPP
