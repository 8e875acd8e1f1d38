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

#ifndef TSFEW_CORE_REPORT_HPP
#define TSFEW_CORE_REPORT_HPP

#include <string>

#include "core/metrics.hpp"

namespace tsfew {

// Confusion-matrix heatmap (counts plus row-normalized percentages to one
// decimal place) and a metrics table, as a standalone SVG document.
std::string render_report_svg(const EvalReport& report);

}  // namespace tsfew

#endif  // TSFEW_CORE_REPORT_HPP
