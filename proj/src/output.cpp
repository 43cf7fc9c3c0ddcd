// Copyright 2026 The nanomech Authors
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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "nanomech/scenarios.hpp"

namespace nanomech::scenarios {

namespace {

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, sep)) out.push_back(trim(field));
  return out;
}

}  // namespace

std::string format_csv(const std::vector<std::string>& columns,
                       const std::vector<std::vector<double>>& data,
                       const std::vector<std::string>& footer) {
  if (columns.size() != data.size()) {
    throw std::invalid_argument("format_csv: column/data count mismatch");
  }
  const std::size_t rows = data.empty() ? 0 : data.front().size();
  for (const auto& col : data) {
    if (col.size() != rows) {
      throw std::invalid_argument("format_csv: ragged columns");
    }
  }
  std::string out;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) out += ", ";
    out += columns[c];
  }
  out += '\n';
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out += ", ";
      out += number(data[c][r]);
    }
    out += '\n';
  }
  for (const auto& f : footer) {
    out += "# ";
    out += f;
    out += '\n';
  }
  return out;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      t.footer.push_back(trim(line.substr(1)));
      continue;
    }
    const auto fields = split(line, ',');
    if (header) {
      t.columns = fields;
      t.data.assign(fields.size(), {});
      header = false;
      continue;
    }
    if (fields.size() != t.columns.size()) {
      throw std::invalid_argument("parse_csv: row has " +
                                  std::to_string(fields.size()) +
                                  " fields, header has " +
                                  std::to_string(t.columns.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      char* end = nullptr;
      const double v = std::strtod(fields[c].c_str(), &end);
      if (end != fields[c].c_str() + fields[c].size()) {
        throw std::invalid_argument("parse_csv: bad number '" + fields[c] + "'");
      }
      t.data[c].push_back(v);
    }
  }
  return t;
}

std::string format_svg(const std::string& title, const std::vector<double>& x,
                       const std::vector<evolution::Series>& series,
                       const std::string& x_label) {
  constexpr double width = 800, height = 480;
  constexpr double left = 70, right = 160, top = 40, bottom = 60;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  static const char* colors[] = {"#d62728", "#2ca02c", "#1f77b4",
                                 "#9467bd", "#ff7f0e", "#17becf"};

  double x_min = x.empty() ? 0.0 : x.front();
  double x_max = x.empty() ? 1.0 : x.back();
  if (x_max <= x_min) x_max = x_min + 1.0;
  double y_min = 0.0, y_max = 0.0;
  for (const auto& s : series) {
    for (double v : s.values) {
      if (!std::isfinite(v)) continue;
      y_min = std::min(y_min, v);
      y_max = std::max(y_max, v);
    }
  }
  if (y_max <= y_min) y_max = y_min + 1.0;

  auto px = [&](double v) { return left + (v - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double v) { return top + (y_max - v) / (y_max - y_min) * plot_h; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
         "font-size=\"15\">" << title << "</text>\n";
  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w
      << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double xv = x_min + (x_max - x_min) * k / 5.0;
    const double yv = y_min + (y_max - y_min) * k / 5.0;
    out << "<text x=\"" << px(xv) << "\" y=\"" << top + plot_h + 18
        << "\" text-anchor=\"middle\">" << number(std::round(xv * 100) / 100)
        << "</text>\n";
    out << "<text x=\"" << left - 8 << "\" y=\"" << py(yv) + 4
        << "\" text-anchor=\"end\">" << number(std::round(yv * 1000) / 1000)
        << "</text>\n";
  }
  out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 15
      << "\" text-anchor=\"middle\">" << x_label << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = colors[s % std::size(colors)];
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.2\" points=\"";
    const std::size_t n = std::min(x.size(), series[s].values.size());
    for (std::size_t i = 0; i < n; ++i) {
      const double v = series[s].values[i];
      if (!std::isfinite(v)) continue;
      out << px(x[i]) << ',' << py(v) << ' ';
    }
    out << "\"/>\n";
    const double ly = top + 16 + 18 * static_cast<double>(s);
    out << "<line x1=\"" << left + plot_w + 12 << "\" y1=\"" << ly << "\" x2=\""
        << left + plot_w + 36 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << left + plot_w + 42 << "\" y=\"" << ly + 4 << "\">"
        << series[s].name << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace nanomech::scenarios
