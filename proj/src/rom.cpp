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

#include "mtskit/rom.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace mts {

namespace {

int cycles_per_column(int row_len) { return row_len >= kRomSlots ? 1 : kLaneSlots / row_len; }

int segment_columns(int rows, int row_len) {
  if (row_len == kRomSlots) return rows;
  const int cycles = rows / 2;
  const int per = cycles_per_column(row_len);
  return (cycles + per - 1) / per;
}

// Canonical rank: DCT2 parts by descending order, then DST7 by descending order.
int canonical_rank(TransformKind kind, int n) {
  const int base = kind == TransformKind::DCT2 ? 0 : 10;
  return base + (6 - log2_order(n));
}

}  // namespace

RomSlot RomSegment::locate(int row, int entry) const {
  if (row < 0 || row >= rows || entry < 0 || entry >= row_len) {
    throw DomainError("ROM segment index out of range");
  }
  if (wide()) return {first_word + row, entry};
  const int per = cycles_per_column(row_len);
  const int cycle = row / 2;
  const int lane = row % 2;
  return {first_word + cycle / per, kLaneSlots * lane + (cycle % per) * row_len + entry};
}

int RomSegment::column_of_cycle(int cycle) const {
  return wide() ? cycle : cycle / cycles_per_column(row_len);
}

int RomSegment::slot_base_of_cycle(int cycle) const {
  return wide() ? 0 : (cycle % cycles_per_column(row_len)) * row_len;
}

const RomSegment* RomImage::find(TransformKind kind, int n) const {
  for (const auto& s : segments)
    if (s.kind == kind && s.n == n) return &s;
  return nullptr;
}

int RomImage::word_offset(TransformKind kind, int n, int col) const {
  for (const auto& d : directory)
    if (d.kind == kind && d.n == n && d.col == col) return d.offset;
  throw DomainError("ROM directory has no entry for the requested column");
}

int RomImage::coefficient(TransformKind kind, int n, int row, int entry) const {
  const RomSegment* seg = find(kind, n);
  if (!seg) throw DomainError("ROM does not hold the requested segment");
  const RomSlot pos = seg->locate(row, entry);
  const int offset = word_offset(kind, n, pos.word - seg->first_word);
  return words[static_cast<std::size_t>(offset)][static_cast<std::size_t>(pos.slot)];
}

std::vector<std::vector<std::int16_t>> segment_rows(const CoeffMatrix& m) {
  const int n = m.n();
  std::vector<std::vector<std::int16_t>> rows;
  auto prefix = [&](int i, int len) {
    auto r = m.row(i);
    return std::vector<std::int16_t>(r.begin(), r.begin() + len);
  };
  if (m.kind() == TransformKind::DCT2) {
    if (n == 4) {
      for (int i = 0; i < 4; ++i) rows.push_back(prefix(i, 2));
    } else {
      const int stored = n == 64 ? 16 : n / 2;
      for (int r = 0; r < stored; ++r) rows.push_back(prefix(2 * r + 1, n / 2));
    }
  } else if (m.kind() == TransformKind::DST7) {
    const int stored = n == 32 ? 16 : n;
    for (int r = 0; r < stored; ++r) rows.push_back(prefix(r, n));
  } else {
    throw PackingError("only DCT2 and DST7 tables are stored; DCT8 is derived from DST7");
  }
  return rows;
}

RomImage pack_rom(std::span<const CoeffMatrix* const> matrices) {
  std::vector<const CoeffMatrix*> sorted(matrices.begin(), matrices.end());
  for (const auto* m : sorted) {
    if (m == nullptr) throw PackingError("null matrix handed to pack_rom");
    if (m->kind() == TransformKind::DCT8)
      throw PackingError("only DCT2 and DST7 tables are stored; DCT8 is derived from DST7");
  }
  std::sort(sorted.begin(), sorted.end(), [](const CoeffMatrix* a, const CoeffMatrix* b) {
    return canonical_rank(a->kind(), a->n()) < canonical_rank(b->kind(), b->n());
  });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i]->kind() == sorted[i - 1]->kind() && sorted[i]->n() == sorted[i - 1]->n())
      throw PackingError("duplicate matrix handed to pack_rom");
  }

  RomImage img;
  for (const auto* m : sorted) {
    const auto rows = segment_rows(*m);
    RomSegment seg;
    seg.kind = m->kind();
    seg.n = m->n();
    seg.rows = static_cast<int>(rows.size());
    seg.row_len = static_cast<int>(rows.front().size());
    seg.first_word = img.column_count();
    seg.columns = segment_columns(seg.rows, seg.row_len);
    img.words.resize(img.words.size() + static_cast<std::size_t>(seg.columns), RomWord{});
    for (int r = 0; r < seg.rows; ++r) {
      for (int e = 0; e < seg.row_len; ++e) {
        const int v = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(e)];
        if (v < -128 || v > 127) throw PackingError("coefficient does not fit in 8 bits");
        const RomSlot pos = seg.locate(r, e);
        img.words[static_cast<std::size_t>(pos.word)][static_cast<std::size_t>(pos.slot)] =
            static_cast<std::int8_t>(v);
        ++img.payload_coefficients;
      }
    }
    for (int c = 0; c < seg.columns; ++c)
      img.directory.push_back({seg.kind, seg.n, c, seg.first_word + c});
    img.segments.push_back(seg);
  }
  return img;
}

const RomImage& standard_rom() {
  static const RomImage rom = [] {
    std::vector<const CoeffMatrix*> src;
    for (int n : kAllOrders) src.push_back(&integer_matrix(TransformKind::DCT2, n));
    for (int n : {4, 8, 16, 32}) src.push_back(&integer_matrix(TransformKind::DST7, n));
    return pack_rom(src);
  }();
  return rom;
}

RomBudget rom_budget(const RomImage& rom) {
  RomBudget b;
  b.actual_columns = rom.column_count();
  b.actual_bits = rom.total_bits();
  b.payload_bits = rom.payload_bits();
  b.delta_bits = b.actual_bits - b.target_bits;
  b.within_one_column = std::abs(b.delta_bits) <= kRomWordBits;
  b.flagged = !b.within_one_column;
  std::ostringstream os;
  os << "canonical layout uses " << b.actual_columns << " x 256-bit columns (" << b.actual_bits
     << " bits, " << b.payload_bits << " payload) against the " << b.target_columns
     << "-column / " << b.target_bits << "-bit target; delta " << b.delta_bits << " bits";
  if (b.flagged) os << " [FLAGGED: exceeds one column]";
  b.note = os.str();
  return b;
}

void write_rom_binary(const RomImage& rom, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  for (const auto& w : rom.words)
    out.write(reinterpret_cast<const char*>(w.data()), static_cast<std::streamsize>(w.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::vector<RomWord> read_rom_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<RomWord> words;
  RomWord w{};
  while (in.read(reinterpret_cast<char*>(w.data()), static_cast<std::streamsize>(w.size())))
    words.push_back(w);
  if (in.gcount() != 0) throw std::runtime_error("ROM binary is not a whole number of words");
  return words;
}

std::string rom_map_text(const RomImage& rom) {
  std::ostringstream os;
  for (const auto& d : rom.directory)
    os << to_string(d.kind) << ' ' << d.n << ' ' << d.col << ' ' << d.offset << '\n';
  return os.str();
}

void write_rom_map(const RomImage& rom, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << rom_map_text(rom);
}

}  // namespace mts
