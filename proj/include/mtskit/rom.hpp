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

// Coefficient ROM for the shared-multiplier datapath.
//
// A ROM word ("column") is 256 bits: 32 signed 8-bit coefficients, one per
// multiplier. Slots 0..15 feed the multipliers on input lane X0 and slots
// 16..31 those on lane X1. Each stored segment is a list of coefficient rows;
// row r multiplies one input sample, and its entries land in consecutive
// slots of one lane.
//
// Layout rule for a segment with rows of length L:
//   L == 32 ("wide"): row r occupies all of column r. Both lanes carry the same
//                     sample in that cycle.
//   L <= 16 ("split"): rows are consumed in pairs (2p, 2p+1) during MAC cycle p,
//                     row 2p on lane X0 and row 2p+1 on lane X1. A column packs
//                     16 / L consecutive cycles: row r lives in column
//                     (r/2) / (16/L), at slot 16*(r%2) + ((r/2) % (16/L)) * L.
//
// Segments, in canonical order:
//   DCT2 64  odd part of the 64-point DCT-II, rows M64[2r+1][0..31], r < 16
//            (only 32 input coefficients survive zero-out)
//   DCT2 32, 16, 8  odd parts M_n[2r+1][0..n/2-1], r < n/2
//   DCT2 4   4-point core: row 2p = M4[2p][0..1], row 2p+1 = M4[2p+1][0..1]
//   DST7 32  rows S32[r][0..31], r < 16 (zero-out)
//   DST7 16, 8, 4  full matrices, rows S_n[r][0..n-1]
// DCT-VIII reuses the DST-VII segments through input sign flips and output
// reversal.

#ifndef MTSKIT_ROM_HPP_
#define MTSKIT_ROM_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mtskit/coeff.hpp"

namespace mts {

class PackingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kRomSlots = 32;
inline constexpr int kRomWordBits = 256;
inline constexpr int kLaneSlots = 16;
inline constexpr int kTargetRomColumns = 68;
inline constexpr int kTargetRomBits = kTargetRomColumns * kRomWordBits;  // 17408

using RomWord = std::array<std::int8_t, kRomSlots>;

/// Position of a stored coefficient.
struct RomSlot {
  int word = 0;  // absolute column index in the image
  int slot = 0;  // 0..31
};

/// One stored coefficient table. `kind` is DCT2 or DST7 and `n` is the
/// transform order it serves (see the file comment).
struct RomSegment {
  TransformKind kind = TransformKind::DST7;
  int n = 0;
  int rows = 0;
  int row_len = 0;
  int first_word = 0;
  int columns = 0;

  bool wide() const { return row_len == kRomSlots; }
  /// Layout rule. Throws DomainError for indices outside the segment.
  RomSlot locate(int row, int entry) const;
  /// Column (relative to first_word) and lane slot base used in MAC cycle `cycle`
  /// for split segments; for wide segments lane 1 mirrors lane 0.
  int column_of_cycle(int cycle) const;
  int slot_base_of_cycle(int cycle) const;
};

/// rom.map entry: `<kind> <n> <col> <offset>`.
struct RomDirEntry {
  TransformKind kind = TransformKind::DST7;
  int n = 0;
  int col = 0;
  int offset = 0;
};

struct RomImage {
  std::vector<RomWord> words;
  std::vector<RomSegment> segments;
  std::vector<RomDirEntry> directory;
  int payload_coefficients = 0;

  int column_count() const { return static_cast<int>(words.size()); }
  int total_bits() const { return column_count() * kRomWordBits; }
  int payload_bits() const { return payload_coefficients * 8; }

  /// Segment for (kind, n); nullptr when the image does not hold it.
  const RomSegment* find(TransformKind kind, int n) const;
  /// Reads a coefficient through the directory and layout rule.
  int coefficient(TransformKind kind, int n, int row, int entry) const;
  int word_offset(TransformKind kind, int n, int col) const;
};

/// Rows stored for a source matrix, as described in the file comment.
std::vector<std::vector<std::int16_t>> segment_rows(const CoeffMatrix& m);

/// Packs the given source matrices. Accepts DCT2 (n = 4..64) and DST7
/// (n = 4..32) matrices, each at most once, and emits them in canonical order.
/// Throws PackingError for duplicates, other kinds, or coefficients outside
/// the signed 8-bit range.
RomImage pack_rom(std::span<const CoeffMatrix* const> matrices);

/// ROM holding every segment of the full configuration.
const RomImage& standard_rom();

/// Comparison of the canonical layout against the 68 x 256 target.
struct RomBudget {
  int target_columns = kTargetRomColumns;
  int target_bits = kTargetRomBits;
  int actual_columns = 0;
  int actual_bits = 0;
  int payload_bits = 0;
  int delta_bits = 0;
  bool within_one_column = false;
  bool flagged = false;
  std::string note;
};
RomBudget rom_budget(const RomImage& rom);

/// Little-endian 256-bit words, column 0 first (slot 0 is the lowest byte).
void write_rom_binary(const RomImage& rom, const std::filesystem::path& path);
std::vector<RomWord> read_rom_binary(const std::filesystem::path& path);
void write_rom_map(const RomImage& rom, const std::filesystem::path& path);
std::string rom_map_text(const RomImage& rom);

}  // namespace mts

#endif  // MTSKIT_ROM_HPP_
