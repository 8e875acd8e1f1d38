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

#include "core/image.hpp"

#include <cctype>
#include <fstream>

#include "core/errors.hpp"

namespace tsfew {

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

long parse_positive(const std::string& tok, const std::string& path) {
  if (tok.empty()) raise(ErrorCode::kFormat, "truncated PGM header in " + path);
  for (char c : tok)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      raise(ErrorCode::kFormat, "bad PGM header token '" + tok + "' in " + path);
  long v = std::stol(tok);
  if (v <= 0) raise(ErrorCode::kFormat, "non-positive PGM dimension in " + path);
  return v;
}

}  // namespace

void GrayImage::validate() const {
  if (width < 1 || height < 1)
    raise(ErrorCode::kInvalidArgument, "image: empty dimensions");
  if (pixels.size() != static_cast<size_t>(width) * static_cast<size_t>(height))
    raise(ErrorCode::kInvalidArgument, "image: pixel buffer size mismatch");
}

GrayImage read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::kIo, "cannot open image file " + path);
  std::string magic = next_token(in);
  if (magic != "P5")
    raise(ErrorCode::kFormat, "not a binary PGM (P5): " + path);
  long w = parse_positive(next_token(in), path);
  long h = parse_positive(next_token(in), path);
  long maxval = parse_positive(next_token(in), path);
  if (maxval != 255)
    raise(ErrorCode::kFormat, "unsupported PGM maxval " + std::to_string(maxval) +
                                  " in " + path);
  GrayImage img;
  img.width = static_cast<int>(w);
  img.height = static_cast<int>(h);
  img.pixels.resize(static_cast<size_t>(w) * h);
  in.read(reinterpret_cast<char*>(img.pixels.data()),
          static_cast<std::streamsize>(img.pixels.size()));
  if (static_cast<size_t>(in.gcount()) != img.pixels.size())
    raise(ErrorCode::kFormat, "truncated PGM data in " + path);
  return img;
}

std::vector<uint8_t> pgm_bytes(const GrayImage& img) {
  img.validate();
  std::string header = "P5\n" + std::to_string(img.width) + " " +
                       std::to_string(img.height) + "\n255\n";
  std::vector<uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.pixels.begin(), img.pixels.end());
  return out;
}

void write_pgm(const std::string& path, const GrayImage& img) {
  auto bytes = pgm_bytes(img);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(ErrorCode::kIo, "cannot write image file " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) raise(ErrorCode::kIo, "short write to " + path);
}

}  // namespace tsfew
