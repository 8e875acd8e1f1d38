// Copyright 2026 the tsfew authors
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

#include "core/report.hpp"

#include <cmath>
#include <cstdio>

namespace tsfew {

namespace {

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::string render_report_svg(const EvalReport& report) {
  const int n = report.confusion.num_classes;
  const int cell = 72;
  const int left = 120, top = 60;
  const int grid_w = n * cell, grid_h = n * cell;
  const int table_top = top + grid_h + 50;
  const int width = std::max(left + grid_w + 40, 480);
  const int height = table_top + 24 * (n + 3) + 30;

  std::vector<int64_t> row_totals(n, 0);
  for (int t = 0; t < n; ++t)
    for (int p = 0; p < n; ++p) row_totals[t] += report.confusion.at(t, p);

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(width) + "\" height=\"" + std::to_string(height) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + std::to_string(left) + "\" y=\"24\" font-size=\"16\">"
         "Confusion matrix</text>\n";

  for (int t = 0; t < n; ++t) {
    for (int p = 0; p < n; ++p) {
      const int64_t count = report.confusion.at(t, p);
      const double frac =
          row_totals[t] > 0
              ? static_cast<double>(count) / static_cast<double>(row_totals[t])
              : 0.0;
      const int x = left + p * cell, y = top + t * cell;
      // white -> blue ramp by row fraction
      const int r = static_cast<int>(std::lround(255.0 - 205.0 * frac));
      const int g = static_cast<int>(std::lround(255.0 - 155.0 * frac));
      svg += "<rect x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) +
             "\" width=\"" + std::to_string(cell) + "\" height=\"" +
             std::to_string(cell) + "\" fill=\"rgb(" + std::to_string(r) + "," +
             std::to_string(g) + ",255)\" stroke=\"#888\"/>\n";
      const char* text_fill = frac > 0.6 ? "white" : "black";
      svg += "<text x=\"" + std::to_string(x + cell / 2) + "\" y=\"" +
             std::to_string(y + cell / 2 - 4) +
             "\" text-anchor=\"middle\" fill=\"" + text_fill + "\">" +
             std::to_string(count) + "</text>\n";
      svg += "<text x=\"" + std::to_string(x + cell / 2) + "\" y=\"" +
             std::to_string(y + cell / 2 + 14) +
             "\" text-anchor=\"middle\" fill=\"" + text_fill + "\">" +
             fmt("%.1f", 100.0 * frac) + "%</text>\n";
    }
  }
  for (int i = 0; i < n; ++i) {
    const std::string name = escape_xml(report.class_names[i]);
    svg += "<text x=\"" + std::to_string(left - 8) + "\" y=\"" +
           std::to_string(top + i * cell + cell / 2 + 4) +
           "\" text-anchor=\"end\">" + name + "</text>\n";
    svg += "<text x=\"" + std::to_string(left + i * cell + cell / 2) + "\" y=\"" +
           std::to_string(top + grid_h + 18) + "\" text-anchor=\"middle\">" +
           name + "</text>\n";
  }
  svg += "<text x=\"" + std::to_string(left - 96) + "\" y=\"" +
         std::to_string(top + grid_h / 2) + "\" transform=\"rotate(-90 " +
         std::to_string(left - 96) + " " + std::to_string(top + grid_h / 2) +
         ")\" text-anchor=\"middle\">true</text>\n";
  svg += "<text x=\"" + std::to_string(left + grid_w / 2) + "\" y=\"" +
         std::to_string(top + grid_h + 38) +
         "\" text-anchor=\"middle\">predicted</text>\n";

  int y = table_top;
  auto table_row = [&](const std::string& k, const std::string& v) {
    svg += "<text x=\"" + std::to_string(left) + "\" y=\"" + std::to_string(y) +
           "\">" + escape_xml(k) + "</text>\n";
    svg += "<text x=\"" + std::to_string(left + 200) + "\" y=\"" +
           std::to_string(y) + "\">" + v + "</text>\n";
    y += 24;
  };
  table_row("accuracy", fmt("%.4f", report.accuracy));
  table_row("macro F1", fmt("%.4f", report.macro_f1));
  table_row("F1 (" + report.class_names[report.positive_class] + ", positive)",
            fmt("%.4f", report.positive_f1()));
  for (int c = 0; c < n; ++c)
    table_row("F1 " + report.class_names[c], fmt("%.4f", report.f1_per_class[c]));
  svg += "</svg>\n";
  return svg;
}

}  // namespace tsfew
