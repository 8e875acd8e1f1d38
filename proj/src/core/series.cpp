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

#include "core/series.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "core/errors.hpp"

namespace tsfew {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    // trim surrounding whitespace
    size_t b = field.find_first_not_of(" \t\r");
    size_t e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

bool parse_double(const std::string& s, double* out) {
  if (s.empty()) return false;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return false;
  *out = v;
  return true;
}

}  // namespace

std::vector<double> TimeSeries::channel(int c) const {
  return std::vector<double>(values.begin() + static_cast<size_t>(c) * length,
                             values.begin() + static_cast<size_t>(c + 1) * length);
}

void TimeSeries::validate() const {
  if (channels < 1) raise(ErrorCode::kInvalidArgument, "series: channels < 1");
  if (length < 1) raise(ErrorCode::kInvalidArgument, "series: length < 1");
  if (values.size() != static_cast<size_t>(channels) * static_cast<size_t>(length))
    raise(ErrorCode::kInvalidArgument, "series: values size does not match channels*length");
  for (double v : values) {
    if (!std::isfinite(v))
      raise(ErrorCode::kInvalidArgument, "series: non-finite value");
  }
}

TimeSeries read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::kIo, "cannot open series file " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  size_t width = 0;
  while (std::getline(in, line)) {
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    auto fields = split_csv_line(line);
    std::vector<double> row(fields.size());
    bool numeric = true;
    for (size_t i = 0; i < fields.size(); ++i) {
      if (!parse_double(fields[i], &row[i])) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (first) {  // header row
        first = false;
        continue;
      }
      raise(ErrorCode::kFormat, "non-numeric value in " + path);
    }
    if (rows.empty()) {
      width = row.size();
    } else if (row.size() != width) {
      raise(ErrorCode::kFormat, "ragged row in " + path);
    }
    rows.push_back(std::move(row));
    first = false;
  }
  if (rows.empty()) raise(ErrorCode::kFormat, "no samples in " + path);

  TimeSeries ts;
  ts.channels = static_cast<int>(width);
  ts.length = static_cast<int64_t>(rows.size());
  ts.values.resize(width * rows.size());
  for (size_t n = 0; n < rows.size(); ++n)
    for (size_t c = 0; c < width; ++c)
      ts.values[c * rows.size() + n] = rows[n][c];
  ts.validate();
  return ts;
}

std::string series_csv_bytes(const TimeSeries& ts) {
  std::string out;
  out.reserve(static_cast<size_t>(ts.length) * ts.channels * 12 + 16);
  for (int c = 0; c < ts.channels; ++c) {
    if (c) out.push_back(',');
    out += "c" + std::to_string(c);
  }
  out.push_back('\n');
  char buf[64];
  for (int64_t n = 0; n < ts.length; ++n) {
    for (int c = 0; c < ts.channels; ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", ts.at(c, n));
      if (c) out.push_back(',');
      out += buf;
    }
    out.push_back('\n');
  }
  return out;
}

void write_series_csv(const std::string& path, const TimeSeries& ts) {
  ts.validate();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(ErrorCode::kIo, "cannot write series file " + path);
  const std::string bytes = series_csv_bytes(ts);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) raise(ErrorCode::kIo, "short write to " + path);
}

}  // namespace tsfew
