// Copyright 2026 The lpbench Authors
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

#include "lpb/svg.h"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lpb {

namespace {

struct Panel {
  std::string env;
  std::vector<const AggregateRow*> points;
  const AggregateRow* reference = nullptr;
};

}  // namespace

std::string pareto_svg(const std::vector<AggregateRow>& sweep_rows,
                       const std::vector<AggregateRow>& reference_rows) {
  std::vector<Panel> panels;
  auto panel_for = [&](const std::string& env) -> Panel& {
    for (Panel& p : panels) {
      if (p.env == env) return p;
    }
    panels.push_back(Panel{env, {}, nullptr});
    return panels.back();
  };
  double x_lo = 1e300, x_hi = 0.0;
  for (const AggregateRow& r : sweep_rows) {
    panel_for(r.env).points.push_back(&r);
    x_lo = std::min(x_lo, r.ms_per_plan);
    x_hi = std::max(x_hi, r.ms_per_plan);
  }
  for (const AggregateRow& r : reference_rows) {
    panel_for(r.env).reference = &r;
    x_lo = std::min(x_lo, r.ms_per_plan);
    x_hi = std::max(x_hi, r.ms_per_plan);
  }
  if (x_lo <= 0.0 || panels.empty()) {
    x_lo = 0.01;
    x_hi = std::max(x_hi, 1.0);
  }
  const int pw = 300, ph = 220, margin = 48;
  const int W = static_cast<int>(panels.size()) * (pw + margin) + margin;
  const int H = ph + 2 * margin;
  double lx0 = std::log10(x_lo) - 0.2, lx1 = std::log10(x_hi) + 0.2;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
     << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  for (size_t pi = 0; pi < panels.size(); ++pi) {
    const Panel& p = panels[pi];
    int ox = margin + static_cast<int>(pi) * (pw + margin);
    int oy = margin;
    auto px = [&](double ms) {
      double t = (std::log10(std::max(ms, 1e-6)) - lx0) / (lx1 - lx0);
      return ox + t * pw;
    };
    auto py = [&](double success) { return oy + ph - success / 100.0 * ph; };
    os << "<rect x=\"" << ox << "\" y=\"" << oy << "\" width=\"" << pw
       << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";
    os << "<text x=\"" << ox + pw / 2 << "\" y=\"" << oy - 10
       << "\" text-anchor=\"middle\" font-size=\"14\">" << p.env << "</text>\n";
    for (int g = 0; g <= 4; ++g) {
      double s = 25.0 * g;
      os << "<line x1=\"" << ox << "\" y1=\"" << py(s) << "\" x2=\"" << ox + pw
         << "\" y2=\"" << py(s)
         << "\" stroke=\"#ddd\" stroke-width=\"0.5\"/>\n";
      os << "<text x=\"" << ox - 6 << "\" y=\"" << py(s) + 4
         << "\" text-anchor=\"end\" font-size=\"9\">" << static_cast<int>(s)
         << "</text>\n";
    }
    for (const AggregateRow* r : p.points) {
      os << "<circle cx=\"" << px(r->ms_per_plan) << "\" cy=\""
         << py(r->success_rate)
         << "\" r=\"4\" fill=\"#c0392b\" fill-opacity=\"0.7\">"
         << "<title>" << r->variant << ": " << format_double(r->success_rate)
         << "% @ " << format_double(r->ms_per_plan) << " ms/plan</title>"
         << "</circle>\n";
    }
    if (p.reference) {
      double cx = px(p.reference->ms_per_plan);
      double cy = py(p.reference->success_rate);
      os << "<path d=\"M" << cx << ' ' << cy - 7 << " L" << cx + 6.5 << ' '
         << cy + 4.5 << " L" << cx - 6.5 << ' ' << cy + 4.5
         << " Z\" fill=\"#d4a017\" stroke=\"#7a5c00\">"
         << "<title>" << p.reference->method << ": "
         << format_double(p.reference->success_rate) << "% @ "
         << format_double(p.reference->ms_per_plan) << " ms/plan</title>"
         << "</path>\n";
    }
    os << "<text x=\"" << ox + pw / 2 << "\" y=\"" << oy + ph + 26
       << "\" text-anchor=\"middle\" font-size=\"10\">ms per plan call "
          "(log)</text>\n";
  }
  os << "<text x=\"12\" y=\"" << margin + ph / 2
     << "\" font-size=\"10\" transform=\"rotate(-90 12 " << margin + ph / 2
     << ")\" text-anchor=\"middle\">success rate (%)</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace lpb
