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

#ifndef TSFEW_CORE_SERIES_HPP
#define TSFEW_CORE_SERIES_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace tsfew {

// A labeled multichannel sequence of real samples. Values are stored
// channel-major: values[c * length + n].
struct TimeSeries {
  int channels = 0;
  int64_t length = 0;
  std::vector<double> values;
  double sample_rate = 0.0;  // metadata only
  int label = -1;            // class index, -1 when unlabeled

  double at(int channel, int64_t n) const {
    return values[static_cast<size_t>(channel) * length + n];
  }
  std::vector<double> channel(int c) const;

  // Enforces equal-length channels and finite values.
  void validate() const;
};

// CSV layout: one row per time step, one column per channel, optional
// header row. The writer emits a "c0,c1,..." header and %.17g values so a
// round trip is value-exact.
TimeSeries read_series_csv(const std::string& path);
void write_series_csv(const std::string& path, const TimeSeries& ts);
std::string series_csv_bytes(const TimeSeries& ts);

}  // namespace tsfew

#endif  // TSFEW_CORE_SERIES_HPP
