/*
 * Copyright 2026 The mtskit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Block files.
//
// Text: a header line `W H BITDEPTH KIND_H KIND_V` then W*H integers in
// row-major order, whitespace separated. Kinds are names (dct2, dst7, dct8)
// or tr_type codes (0, 1, 2). `#` starts a comment that runs to end of line.
//
// Binary: "MTSB", u16 W, u16 H, u8 BITDEPTH, u8 KIND_H, u8 KIND_V, u8 0,
// then W*H int16 samples. All fields little-endian.

#ifndef MTSKIT_BLOCK_IO_HPP_
#define MTSKIT_BLOCK_IO_HPP_

#include <filesystem>
#include <stdexcept>
#include <string>

#include "mtskit/transform.hpp"

namespace mts {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Block plus the header fields that travel with it.
struct BlockFile {
  Block block;
  int bit_depth = 8;
  TransformKind kind_h = TransformKind::DCT2;
  TransformKind kind_v = TransformKind::DCT2;
};

enum class BlockFormat { Text, Binary };

BlockFile parse_block_text(const std::string& text);
std::string format_block_text(const BlockFile& f);

BlockFile parse_block_binary(const std::string& bytes);
std::string format_block_binary(const BlockFile& f);

/// Detects the format from the magic bytes.
BlockFile read_block_file(const std::filesystem::path& path);
void write_block_file(const BlockFile& f, const std::filesystem::path& path, BlockFormat fmt);

}  // namespace mts

#endif  // MTSKIT_BLOCK_IO_HPP_
