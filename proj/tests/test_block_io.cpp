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

#include <gtest/gtest.h>

#include <filesystem>

#include "mtskit/block_io.hpp"

using namespace mts;

namespace {

BlockFile sample_file() {
  BlockFile f;
  f.block = Block::zeros(4, 8);
  for (std::size_t i = 0; i < f.block.samples.size(); ++i)
    f.block.samples[i] = static_cast<std::int32_t>(i * 977 % 65536) - 32768;
  f.bit_depth = 10;
  f.kind_h = TransformKind::DST7;
  f.kind_v = TransformKind::DCT8;
  return f;
}

int error_line(const std::string& text) {
  try {
    parse_block_text(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST(BlockIo, TextRoundTrip) {
  const BlockFile f = sample_file();
  const BlockFile g = parse_block_text(format_block_text(f));
  EXPECT_EQ(g.block, f.block);
  EXPECT_EQ(g.bit_depth, 10);
  EXPECT_EQ(g.kind_h, TransformKind::DST7);
  EXPECT_EQ(g.kind_v, TransformKind::DCT8);
}

TEST(BlockIo, BinaryRoundTrip) {
  const BlockFile f = sample_file();
  const std::string bytes = format_block_binary(f);
  EXPECT_EQ(bytes.substr(0, 4), "MTSB");
  EXPECT_EQ(bytes.size(), 12u + 2u * 32u);
  const BlockFile g = parse_block_binary(bytes);
  EXPECT_EQ(g.block, f.block);
  EXPECT_EQ(g.kind_v, TransformKind::DCT8);
}

TEST(BlockIo, FilesDetectFormat) {
  const auto dir = std::filesystem::temp_directory_path() / "mtskit_block_io";
  std::filesystem::create_directories(dir);
  const BlockFile f = sample_file();
  write_block_file(f, dir / "a.txt", BlockFormat::Text);
  write_block_file(f, dir / "a.bin", BlockFormat::Binary);
  EXPECT_EQ(read_block_file(dir / "a.txt").block, f.block);
  EXPECT_EQ(read_block_file(dir / "a.bin").block, f.block);
  EXPECT_THROW(read_block_file(dir / "missing"), std::runtime_error);
  std::filesystem::remove_all(dir);
}

TEST(BlockIo, CommentsCommasAndCodes) {
  const BlockFile f = parse_block_text("# coefficients\n4 4 8 2 1  # dst7 dct8\n1, 2, 3, 4\n0 0 0 0\n0 0 0 0\n0 0 0 -5\n");
  EXPECT_EQ(f.kind_h, TransformKind::DST7);
  EXPECT_EQ(f.kind_v, TransformKind::DCT8);
  EXPECT_EQ(f.block.at(0, 2), 3);
  EXPECT_EQ(f.block.at(3, 3), -5);
  EXPECT_EQ(parse_block_text("4 4 8 dct2 DCT2\n" + std::string(16 * 2, ' ').replace(0, 31, "0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0")).kind_h,
            TransformKind::DCT2);
}

TEST(BlockIo, ErrorsCarryLineNumbers) {
  EXPECT_EQ(error_line("4 4 8 0 0\n0 0 0 0\n0 x 0 0\n0 0 0 0\n0 0 0 0\n"), 3);
  EXPECT_EQ(error_line("4 4 8 0 0\n0 0 0 0\n"), 2);
  EXPECT_EQ(error_line("4 4 8 0 0\n0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0\n\n7\n"), 4);
  EXPECT_EQ(error_line("5 4 8 0 0\n"), 1);
  EXPECT_EQ(error_line("4 4 9 0 0\n"), 1);
  EXPECT_EQ(error_line("4 4 8 dct4 0\n"), 1);
  EXPECT_EQ(error_line("\n\n4 4 8 0 0\n0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 99999\n"), 4);
  EXPECT_EQ(error_line(""), 1);
}

TEST(BlockIo, BinaryErrors) {
  EXPECT_THROW(parse_block_binary("MTS"), ParseError);
  EXPECT_THROW(parse_block_binary("XXXXxxxxxxxx"), ParseError);
  std::string bytes = format_block_binary(sample_file());
  EXPECT_THROW(parse_block_binary(bytes.substr(0, bytes.size() - 1)), ParseError);
  EXPECT_THROW(parse_block_binary(bytes + "z"), ParseError);
  bytes[4] = 5;
  EXPECT_THROW(parse_block_binary(bytes), ParseError);
}
