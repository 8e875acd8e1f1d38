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

#ifndef TSFEW_CORE_AUGMENT_HPP
#define TSFEW_CORE_AUGMENT_HPP

#include <cstdint>
#include <vector>

#include "core/image.hpp"

namespace tsfew {

struct EraseConfig {
  double area_ratio = 0.5;  // in [0.1, 1]
  uint64_t rng_seed = 0;
  int max_retries = 100;

  void validate() const;
};

struct EraseRect {
  int x = 0, y = 0, w = 0, h = 0;
};

struct AugmentPlan {
  std::vector<double> ratios;  // one erased variant per ratio
  bool keep_original = true;
  int max_retries = 100;

  size_t variants_per_image() const {
    return ratios.size() + (keep_original ? 1 : 0);
  }
  void validate() const;
};

// Overwrites one randomly placed rectangle with uniform random bytes.
// Draw sequence (splitmix64 stream seeded with cfg.rng_seed, see FORMATS.md):
// rectangle width uniform in [0.1*W, ratio*W] and height uniform in
// [0.1*H, ratio*H] rounded to nearest pixel, corner uniform over the image;
// accepted when x + w < W and y + h < H, otherwise all draws repeat. The
// accepted rectangle is filled row-major with uniform integers in [0, 255].
GrayImage random_erase(const GrayImage& img, const EraseConfig& cfg,
                       EraseRect* rect_out = nullptr);

// Expands each image into its planned variants (original first when kept,
// then one erased variant per ratio, in plan order). The erase seed for
// image i at ratio index j is derive_seed(master_seed, i, j), so the result
// does not depend on processing order.
std::vector<GrayImage> augment_set(const std::vector<GrayImage>& images,
                                   const AugmentPlan& plan, uint64_t master_seed);

}  // namespace tsfew

#endif  // TSFEW_CORE_AUGMENT_HPP
