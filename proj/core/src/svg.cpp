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

#include "vchunk/svg.hpp"

#include <algorithm>
#include <cmath>

#include "vchunk/rational.hpp"

namespace vchunk {
namespace {

constexpr int kLeft = 70;
constexpr int kRight = 170;
constexpr int kTop = 50;
constexpr int kBottom = 60;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v) { return format_fixed(v, 2); }

double nice_max(double v) {
    if (!(v > 0)) return 1.0;
    const double p = std::pow(10.0, std::floor(std::log10(v)));
    for (const double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
        if (m * p >= v) return m * p;
    }
    return 10.0 * p;
}

std::string header(const std::string& title) {
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kSvgWidth) +
                      "\" height=\"" + std::to_string(kSvgHeight) + "\" viewBox=\"0 0 " + std::to_string(kSvgWidth) +
                      " " + std::to_string(kSvgHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<text x=\"" + std::to_string(kSvgWidth / 2) + "\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">" +
           xml_escape(title) + "</text>\n";
    return out;
}

std::string y_axis(double y_max, const std::string& label) {
    const int plot_h = kSvgHeight - kTop - kBottom;
    const int plot_w = kSvgWidth - kLeft - kRight;
    std::string out;
    for (int t = 0; t <= 5; ++t) {
        const double v = y_max * t / 5.0;
        const double y = kTop + plot_h - plot_h * t / 5.0;
        out += "<line x1=\"" + std::to_string(kLeft) + "\" y1=\"" + num(y) + "\" x2=\"" + std::to_string(kLeft + plot_w) +
               "\" y2=\"" + num(y) + "\" stroke=\"#dddddd\"/>\n";
        out += "<text x=\"" + std::to_string(kLeft - 8) + "\" y=\"" + num(y + 4) + "\" text-anchor=\"end\">" + num(v) +
               "</text>\n";
    }
    out += "<text x=\"18\" y=\"" + std::to_string(kTop + plot_h / 2) + "\" transform=\"rotate(-90 18 " +
           std::to_string(kTop + plot_h / 2) + ")\" text-anchor=\"middle\">" + xml_escape(label) + "</text>\n";
    out += "<line x1=\"" + std::to_string(kLeft) + "\" y1=\"" + std::to_string(kTop) + "\" x2=\"" + std::to_string(kLeft) +
           "\" y2=\"" + std::to_string(kTop + plot_h) + "\" stroke=\"black\"/>\n";
    out += "<line x1=\"" + std::to_string(kLeft) + "\" y1=\"" + std::to_string(kTop + plot_h) + "\" x2=\"" +
           std::to_string(kLeft + plot_w) + "\" y2=\"" + std::to_string(kTop + plot_h) + "\" stroke=\"black\"/>\n";
    return out;
}

}  // namespace

std::string xml_escape(const std::string& text) {
    std::string out;
    for (const char ch : text) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

std::string svg_line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                           const std::vector<Series>& series) {
    const int plot_h = kSvgHeight - kTop - kBottom;
    const int plot_w = kSvgWidth - kLeft - kRight;
    std::size_t n = 1;
    double top = 0.0;
    for (const auto& s : series) {
        n = std::max(n, s.values.size());
        for (const double v : s.values) top = std::max(top, v);
    }
    const double y_max = nice_max(top);
    auto px = [&](std::size_t i) { return n == 1 ? kLeft + plot_w / 2.0 : kLeft + plot_w * static_cast<double>(i) / (n - 1); };
    auto py = [&](double v) { return kTop + plot_h - plot_h * v / y_max; };
    std::string out = header(title) + y_axis(y_max, y_label);
    for (std::size_t i = 0; i < n; ++i) {
        out += "<text x=\"" + num(px(i)) + "\" y=\"" + std::to_string(kTop + plot_h + 18) + "\" text-anchor=\"middle\">" +
               std::to_string(i + 1) + "</text>\n";
    }
    out += "<text x=\"" + std::to_string(kLeft + plot_w / 2) + "\" y=\"" + std::to_string(kSvgHeight - 18) +
           "\" text-anchor=\"middle\">" + xml_escape(x_label) + "</text>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const char* color = kPalette[k % std::size(kPalette)];
        std::string points;
        for (std::size_t i = 0; i < series[k].values.size(); ++i) {
            if (i) points += ' ';
            points += num(px(i)) + "," + num(py(series[k].values[i]));
        }
        out += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\" points=\"" + points + "\"/>\n";
        for (std::size_t i = 0; i < series[k].values.size(); ++i) {
            out += "<circle cx=\"" + num(px(i)) + "\" cy=\"" + num(py(series[k].values[i])) + "\" r=\"3\" fill=\"" + color +
                   "\"/>\n";
        }
        const int ly = kTop + 10 + static_cast<int>(k) * 20;
        out += "<line x1=\"" + std::to_string(kSvgWidth - kRight + 15) + "\" y1=\"" + std::to_string(ly) + "\" x2=\"" +
               std::to_string(kSvgWidth - kRight + 35) + "\" y2=\"" + std::to_string(ly) + "\" stroke=\"" + color +
               "\" stroke-width=\"2\"/>\n";
        out += "<text x=\"" + std::to_string(kSvgWidth - kRight + 40) + "\" y=\"" + std::to_string(ly + 4) + "\">" +
               xml_escape(series[k].name) + "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

std::string svg_bar_chart(const std::string& title, const std::string& y_label,
                          const std::vector<std::pair<std::string, double>>& bars) {
    const int plot_h = kSvgHeight - kTop - kBottom;
    const int plot_w = kSvgWidth - kLeft - kRight;
    double top = 0.0;
    for (const auto& b : bars) top = std::max(top, b.second);
    const double y_max = nice_max(top);
    std::string out = header(title) + y_axis(y_max, y_label);
    const double slot = bars.empty() ? plot_w : static_cast<double>(plot_w) / bars.size();
    for (std::size_t i = 0; i < bars.size(); ++i) {
        const double h = plot_h * std::max(0.0, bars[i].second) / y_max;
        const double x = kLeft + slot * i + slot * 0.15;
        out += "<rect x=\"" + num(x) + "\" y=\"" + num(kTop + plot_h - h) + "\" width=\"" + num(slot * 0.7) +
               "\" height=\"" + num(h) + "\" fill=\"" + kPalette[i % std::size(kPalette)] + "\"/>\n";
        out += "<text x=\"" + num(x + slot * 0.35) + "\" y=\"" + num(kTop + plot_h - h - 6) + "\" text-anchor=\"middle\">" +
               format_fixed(bars[i].second, 3) + "</text>\n";
        out += "<text x=\"" + num(x + slot * 0.35) + "\" y=\"" + std::to_string(kTop + plot_h + 18) +
               "\" text-anchor=\"middle\">" + xml_escape(bars[i].first) + "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace vchunk
