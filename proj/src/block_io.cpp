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

#include "mtskit/block_io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>
#include <vector>

namespace mts {

namespace {

struct Token {
  std::string text;
  int line = 0;
};

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  int line = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
      ++i;
    } else if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (c == ' ' || c == '\t' || c == '\r' || c == ',') {
      ++i;
    } else {
      const std::size_t start = i;
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != '#' &&
             text[i] != ',')
        ++i;
      out.push_back({text.substr(start, i - start), line});
    }
  }
  return out;
}

long long to_int(const Token& t, const char* what) {
  long long v = 0;
  const char* b = t.text.data();
  const char* e = b + t.text.size();
  if (*b == '+') ++b;
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e) throw ParseError(std::string("expected integer ") + what + ", got '" + t.text + "'", t.line);
  return v;
}

TransformKind to_kind(const Token& t) {
  auto k = parse_kind(t.text);
  if (!k) throw ParseError("unknown transform kind '" + t.text + "'", t.line);
  return *k;
}

void check_dims(int w, int h, int bd, int line) {
  auto legal = [](int s) { return s == 4 || s == 8 || s == 16 || s == 32 || s == 64; };
  if (!legal(w) || !legal(h)) throw ParseError("block dimensions must be 4, 8, 16, 32 or 64", line);
  if (bd != 8 && bd != 10) throw ParseError("bit depth must be 8 or 10", line);
}

void put_u16(std::string& s, unsigned v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>((v >> 8) & 0xff));
}

unsigned get_u16(const std::string& s, std::size_t at) {
  return static_cast<unsigned>(static_cast<unsigned char>(s[at])) |
         (static_cast<unsigned>(static_cast<unsigned char>(s[at + 1])) << 8);
}

}  // namespace

BlockFile parse_block_text(const std::string& text) {
  const auto toks = tokenize(text);
  if (toks.size() < 5) throw ParseError("missing header `W H BITDEPTH KIND_H KIND_V`", toks.empty() ? 1 : toks.back().line);
  BlockFile f;
  const int w = static_cast<int>(to_int(toks[0], "width"));
  const int h = static_cast<int>(to_int(toks[1], "height"));
  f.bit_depth = static_cast<int>(to_int(toks[2], "bit depth"));
  check_dims(w, h, f.bit_depth, toks[0].line);
  f.kind_h = to_kind(toks[3]);
  f.kind_v = to_kind(toks[4]);
  const std::size_t count = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  if (toks.size() - 5 < count)
    throw ParseError("expected " + std::to_string(count) + " samples, found " + std::to_string(toks.size() - 5),
                     toks.back().line);
  if (toks.size() - 5 > count) throw ParseError("trailing data after " + std::to_string(count) + " samples", toks[5 + count].line);
  f.block = Block::zeros(w, h, 16);
  for (std::size_t i = 0; i < count; ++i) {
    const Token& t = toks[5 + i];
    const long long v = to_int(t, "sample");
    if (v < kCoeffMin || v > kCoeffMax) throw ParseError("sample " + t.text + " outside the 16-bit range", t.line);
    f.block.samples[i] = static_cast<std::int32_t>(v);
  }
  return f;
}

std::string format_block_text(const BlockFile& f) {
  std::ostringstream os;
  os << f.block.width << ' ' << f.block.height << ' ' << f.bit_depth << ' ' << to_string(f.kind_h) << ' '
     << to_string(f.kind_v) << '\n';
  for (int r = 0; r < f.block.height; ++r) {
    for (int c = 0; c < f.block.width; ++c) os << (c ? " " : "") << f.block.at(r, c);
    os << '\n';
  }
  return os.str();
}

BlockFile parse_block_binary(const std::string& bytes) {
  if (bytes.size() < 12 || bytes.compare(0, 4, "MTSB") != 0) throw ParseError("not an MTSB binary block", 0);
  BlockFile f;
  const int w = static_cast<int>(get_u16(bytes, 4));
  const int h = static_cast<int>(get_u16(bytes, 6));
  f.bit_depth = static_cast<unsigned char>(bytes[8]);
  check_dims(w, h, f.bit_depth, 0);
  auto kh = kind_from_code(static_cast<unsigned char>(bytes[9]));
  auto kv = kind_from_code(static_cast<unsigned char>(bytes[10]));
  if (!kh || !kv) throw ParseError("bad transform kind code in binary header", 0);
  f.kind_h = *kh;
  f.kind_v = *kv;
  const std::size_t count = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  if (bytes.size() != 12 + 2 * count)
    throw ParseError("binary payload holds " + std::to_string((bytes.size() - 12) / 2) + " samples, expected " +
                         std::to_string(count),
                     0);
  f.block = Block::zeros(w, h, 16);
  for (std::size_t i = 0; i < count; ++i)
    f.block.samples[i] = static_cast<std::int16_t>(get_u16(bytes, 12 + 2 * i));
  return f;
}

std::string format_block_binary(const BlockFile& f) {
  std::string s = "MTSB";
  put_u16(s, static_cast<unsigned>(f.block.width));
  put_u16(s, static_cast<unsigned>(f.block.height));
  s.push_back(static_cast<char>(f.bit_depth));
  s.push_back(static_cast<char>(static_cast<int>(f.kind_h)));
  s.push_back(static_cast<char>(static_cast<int>(f.kind_v)));
  s.push_back('\0');
  for (auto v : f.block.samples) {
    if (v < kCoeffMin || v > kCoeffMax) throw DomainError("sample outside the 16-bit range");
    put_u16(s, static_cast<unsigned>(static_cast<std::uint16_t>(static_cast<std::int16_t>(v))));
  }
  return s;
}

BlockFile read_block_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.compare(0, 4, "MTSB") == 0) return parse_block_binary(bytes);
  return parse_block_text(bytes);
}

void write_block_file(const BlockFile& f, const std::filesystem::path& path, BlockFormat fmt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << (fmt == BlockFormat::Binary ? format_block_binary(f) : format_block_text(f));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace mts
