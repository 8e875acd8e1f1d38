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

#ifndef TSFEW_CORE_SHA256_HPP
#define TSFEW_CORE_SHA256_HPP

#include <array>
#include <cstdint>
#include <cstddef>
#include <string>
#include <vector>

namespace tsfew {

// FIPS 180-4 SHA-256, used for content fingerprints and leakage checks.
class Sha256 {
 public:
  Sha256();
  void update(const void* data, size_t len);
  void update(const std::string& s) { update(s.data(), s.size()); }
  // Finalizes and returns the 32-byte digest; the object must not be
  // updated afterwards.
  std::array<uint8_t, 32> digest();
  std::string hex_digest();

 private:
  void process_block(const uint8_t* block);

  uint32_t h_[8];
  uint64_t total_len_ = 0;
  uint8_t buffer_[64];
  size_t buffer_len_ = 0;
  bool finalized_ = false;
};

std::string sha256_hex(const void* data, size_t len);
std::string sha256_hex(const std::string& s);
std::string sha256_hex(const std::vector<uint8_t>& v);

}  // namespace tsfew

#endif  // TSFEW_CORE_SHA256_HPP
