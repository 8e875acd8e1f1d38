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

#ifndef TSFEW_CORE_IMAGE_HPP
#define TSFEW_CORE_IMAGE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace tsfew {

// 8-bit single-channel image, row-major.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> pixels;  // height * width

  uint8_t at(int y, int x) const {
    return pixels[static_cast<size_t>(y) * width + x];
  }
  uint8_t& at(int y, int x) {
    return pixels[static_cast<size_t>(y) * width + x];
  }
  void validate() const;
  bool operator==(const GrayImage& o) const = default;
};

// Binary PGM (P5), maxval 255. The writer emits a canonical header so the
// byte stream is reproducible; the reader also accepts '#' comments.
GrayImage read_pgm(const std::string& path);
void write_pgm(const std::string& path, const GrayImage& img);
std::vector<uint8_t> pgm_bytes(const GrayImage& img);

}  // namespace tsfew

#endif  // TSFEW_CORE_IMAGE_HPP
