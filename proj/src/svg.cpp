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

#include "nlhv/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace nlhv {

namespace {

std::string fmt2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string fmt_tick(double v) {
  // Snap values that are ticks up to rounding.
  if (std::abs(v) < 1e-12) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

double nice_step(double range) {
  const double raw = range / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  double step;
  if (norm < 1.5) {
    step = 1.0;
  } else if (norm < 3.5) {
    step = 2.0;
  } else if (norm < 7.5) {
    step = 5.0;
  } else {
    step = 10.0;
  }
  return step * mag;
}

}  // namespace

std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label, const std::vector<SvgSeries>& series,
                              int width, int height, const std::string& comment) {
  double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
  bool have_point = false;
  for (const auto& s : series) {
    for (const auto& [px, py] : s.points) {
      if (!have_point) {
        x_min = x_max = px;
        y_min = y_max = py;
        have_point = true;
      } else {
        x_min = std::min(x_min, px);
        x_max = std::max(x_max, px);
        y_min = std::min(y_min, py);
        y_max = std::max(y_max, py);
      }
    }
  }
  if (!have_point) throw std::invalid_argument("chart needs at least one data point");
  if (x_max - x_min < 1e-12) {
    x_min -= 0.5;
    x_max += 0.5;
  }
  if (y_max - y_min < 1e-12) {
    y_min -= 0.5;
    y_max += 0.5;
  }
  const double y_pad = 0.05 * (y_max - y_min);
  y_min -= y_pad;
  y_max += y_pad;

  const double ml = 72, mr = 24, mt = 44, mb = 56;  // margins
  const double pw = width - ml - mr;
  const double ph = height - mt - mb;
  const auto sx = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * pw; };
  const auto sy = [&](double y) { return mt + (y_max - y) / (y_max - y_min) * ph; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  if (!comment.empty()) out << "<!-- " << comment << " -->\n";
  out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << fmt2(ml + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << escape_xml(title) << "</text>\n";

  const double x_step = nice_step(x_max - x_min);
  const double y_step = nice_step(y_max - y_min);
  out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  for (double t = std::ceil(x_min / x_step) * x_step; t <= x_max + 1e-12 * x_step; t += x_step) {
    const double px = sx(t);
    out << "<line x1=\"" << fmt2(px) << "\" y1=\"" << fmt2(mt) << "\" x2=\"" << fmt2(px)
        << "\" y2=\"" << fmt2(mt + ph) << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << fmt2(px) << "\" y=\"" << fmt2(mt + ph + 16)
        << "\" text-anchor=\"middle\">" << fmt_tick(t) << "</text>\n";
  }
  for (double t = std::ceil(y_min / y_step) * y_step; t <= y_max + 1e-12 * y_step; t += y_step) {
    const double py = sy(t);
    out << "<line x1=\"" << fmt2(ml) << "\" y1=\"" << fmt2(py) << "\" x2=\"" << fmt2(ml + pw)
        << "\" y2=\"" << fmt2(py) << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << fmt2(ml - 6) << "\" y=\"" << fmt2(py + 4)
        << "\" text-anchor=\"end\">" << fmt_tick(t) << "</text>\n";
  }
  out << "</g>\n";

  out << "<rect x=\"" << fmt2(ml) << "\" y=\"" << fmt2(mt) << "\" width=\"" << fmt2(pw)
      << "\" height=\"" << fmt2(ph) << "\" fill=\"none\" stroke=\"#444\"/>\n";
  out << "<text x=\"" << fmt2(ml + pw / 2) << "\" y=\"" << fmt2(height - 12.0)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << escape_xml(x_label) << "</text>\n";
  out << "<text x=\"18\" y=\"" << fmt2(mt + ph / 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 "
      << fmt2(mt + ph / 2) << ")\">" << escape_xml(y_label) << "</text>\n";

  for (const auto& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.8\"";
    if (s.dashed) out << " stroke-dasharray=\"6 4\"";
    out << " points=\"";
    for (size_t i = 0; i < s.points.size(); ++i) {
      if (i) out << ' ';
      out << fmt2(sx(s.points[i].first)) << ',' << fmt2(sy(s.points[i].second));
    }
    out << "\"/>\n";
  }

  const double lx = ml + pw - 230, ly = mt + 10;
  out << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect x=\"" << fmt2(lx - 8) << "\" y=\"" << fmt2(ly - 14) << "\" width=\"230\" height=\""
      << fmt2(series.size() * 18.0 + 10.0) << "\" fill=\"white\" fill-opacity=\"0.85\" "
      << "stroke=\"#999\"/>\n";
  for (size_t i = 0; i < series.size(); ++i) {
    const double ty = ly + 18.0 * i;
    out << "<line x1=\"" << fmt2(lx) << "\" y1=\"" << fmt2(ty - 4) << "\" x2=\"" << fmt2(lx + 26)
        << "\" y2=\"" << fmt2(ty - 4) << "\" stroke=\"" << series[i].color << "\" stroke-width=\"1.8\"";
    if (series[i].dashed) out << " stroke-dasharray=\"6 4\"";
    out << "/>\n";
    out << "<text x=\"" << fmt2(lx + 32) << "\" y=\"" << fmt2(ty) << "\">"
        << escape_xml(series[i].label) << "</text>\n";
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

}  // namespace nlhv
