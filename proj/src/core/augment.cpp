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

#include "core/augment.hpp"

#include <cmath>
#include <string>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace tsfew {

void EraseConfig::validate() const {
  if (!(area_ratio >= 0.1 && area_ratio <= 1.0))
    raise(ErrorCode::kInvalidArgument,
          "erase: area_ratio must lie in [0.1, 1], got " +
              std::to_string(area_ratio));
  if (max_retries < 1)
    raise(ErrorCode::kInvalidArgument, "erase: max_retries must be >= 1");
}

void AugmentPlan::validate() const {
  for (double r : ratios) {
    if (!(r >= 0.1 && r <= 1.0))
      raise(ErrorCode::kInvalidArgument,
            "augment plan: ratio " + std::to_string(r) + " outside [0.1, 1]");
  }
  if (max_retries < 1)
    raise(ErrorCode::kInvalidArgument, "augment plan: max_retries must be >= 1");
}

GrayImage random_erase(const GrayImage& img, const EraseConfig& cfg,
                       EraseRect* rect_out) {
  img.validate();
  cfg.validate();
  const int w = img.width;
  const int h = img.height;
  if (w < 10 || h < 10)
    raise(ErrorCode::kInvalidArgument,
          "erase: image must be at least 10x10 pixels, got " +
              std::to_string(w) + "x" + std::to_string(h));

  SplitMix64 rng(cfg.rng_seed);
  EraseRect rect;
  bool placed = false;
  for (int attempt = 0; attempt < cfg.max_retries; ++attempt) {
    const int we = static_cast<int>(
        std::lround(rng.uniform_real(0.1 * w, cfg.area_ratio * w)));
    const int he = static_cast<int>(
        std::lround(rng.uniform_real(0.1 * h, cfg.area_ratio * h)));
    const int xe = static_cast<int>(rng.uniform_int(0, w - 1));
    const int ye = static_cast<int>(rng.uniform_int(0, h - 1));
    if (xe + we < w && ye + he < h) {
      rect = EraseRect{xe, ye, we, he};
      placed = true;
      break;
    }
  }
  if (!placed)
    raise(ErrorCode::kRuntime,
          "erase-placement-failed: no admissible rectangle after " +
              std::to_string(cfg.max_retries) + " retries (area_ratio " +
              std::to_string(cfg.area_ratio) + ")");

  GrayImage out = img;
  for (int y = rect.y; y < rect.y + rect.h; ++y)
    for (int x = rect.x; x < rect.x + rect.w; ++x)
      out.at(y, x) = static_cast<uint8_t>(rng.uniform_int(0, 255));
  if (rect_out) *rect_out = rect;
  return out;
}

std::vector<GrayImage> augment_set(const std::vector<GrayImage>& images,
                                   const AugmentPlan& plan, uint64_t master_seed) {
  plan.validate();
  std::vector<GrayImage> out;
  out.reserve(images.size() * plan.variants_per_image());
  for (size_t i = 0; i < images.size(); ++i) {
    if (plan.keep_original) out.push_back(images[i]);
    for (size_t j = 0; j < plan.ratios.size(); ++j) {
      EraseConfig cfg;
      cfg.area_ratio = plan.ratios[j];
      cfg.rng_seed = derive_seed(master_seed, i, j);
      cfg.max_retries = plan.max_retries;
      out.push_back(random_erase(images[i], cfg));
    }
  }
  return out;
}

}  // namespace tsfew
