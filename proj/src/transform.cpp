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

#include "mtskit/transform.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>

namespace mts {

namespace {

constexpr int kMaxOrder = 64;

void check_inputs(TransformKind kind, int n, std::span<const std::int32_t> coeffs, int shift,
                  std::span<std::int32_t> out) {
  require_valid_order(kind, n);
  if (static_cast<int>(coeffs.size()) != retained_count(kind, n)) {
    throw DomainError("expected " + std::to_string(retained_count(kind, n)) +
                      " retained coefficients for " + std::string(to_string(kind)) + "-" +
                      std::to_string(n) + ", got " + std::to_string(coeffs.size()));
  }
  if (static_cast<int>(out.size()) != n) throw DomainError("output span must hold n samples");
  if (shift < 0 || shift > 31) throw DomainError("shift out of range");
  for (auto c : coeffs)
    if (c < kCoeffMin || c > kCoeffMax) throw DomainError("coefficient exceeds 16-bit range");
}

void finish(std::span<const std::int64_t> sums, int shift, std::span<std::int32_t> out) {
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = clip16(round_shift(sums[j], shift));
}

// out[j] = sum_i c[i * stride] * M_n[i][j], for an n-point DCT-II over the
// inputs c[0], c[stride], ... (indices past `len` are zero).
void dct2_partial(int n, const std::int32_t* c, int len, int stride, std::int64_t* out) {
  if (n == 2) {
    const std::int64_t a = c[0];
    const std::int64_t b = stride < len ? c[stride] : 0;
    out[0] = 64 * (a + b);
    out[1] = 64 * (a - b);
    return;
  }
  const int half = n / 2;
  std::array<std::int64_t, kMaxOrder / 2> even{};
  std::array<std::int64_t, kMaxOrder / 2> odd{};
  dct2_partial(half, c, len, 2 * stride, even.data());
  const CoeffMatrix& m = integer_matrix(TransformKind::DCT2, n);
  for (int r = 0; r < half; ++r) {
    const int idx = stride * (2 * r + 1);
    if (idx >= len) break;
    const std::int64_t x = c[idx];
    if (x == 0) continue;
    const auto row = m.row(2 * r + 1);
    for (int j = 0; j < half; ++j) odd[static_cast<std::size_t>(j)] += x * row[static_cast<std::size_t>(j)];
  }
  for (int j = 0; j < half; ++j) {
    out[j] = even[static_cast<std::size_t>(j)] + odd[static_cast<std::size_t>(j)];
    out[n - 1 - j] = even[static_cast<std::size_t>(j)] - odd[static_cast<std::size_t>(j)];
  }
}

}  // namespace

Block Block::zeros(int width, int height, int bit_width) {
  Block b;
  b.width = width;
  b.height = height;
  b.bit_width = bit_width;
  b.samples.assign(static_cast<std::size_t>(width * height), 0);
  return b;
}

void Block::validate() const {
  auto legal = [](int s) { return s == 4 || s == 8 || s == 16 || s == 32 || s == 64; };
  if (!legal(width) || !legal(height)) throw DomainError("block dimensions must be 4..64 powers of two");
  if (bit_width < 1 || bit_width > 31) throw DomainError("block bit width out of range");
  if (samples.size() != static_cast<std::size_t>(width * height))
    throw DomainError("block sample count does not match its dimensions");
  const std::int64_t lo = -(std::int64_t{1} << (bit_width - 1));
  const std::int64_t hi = (std::int64_t{1} << (bit_width - 1)) - 1;
  for (auto s : samples)
    if (s < lo || s > hi) throw DomainError("block sample exceeds its declared bit width");
}

bool TransformSpec::is_legal() const {
  if (!is_valid_order(kind_h, size_h) || !is_valid_order(kind_v, size_v)) return false;
  if ((kind_h == TransformKind::DCT2) != (kind_v == TransformKind::DCT2)) return false;
  return bit_depth == 8 || bit_depth == 10;
}

void TransformSpec::validate() const {
  if (!is_legal()) throw DomainError("illegal transform spec " + label());
}

std::string TransformSpec::label() const {
  return std::string(to_string(kind_h)) + "/" + std::string(to_string(kind_v)) + " " +
         std::to_string(size_h) + "x" + std::to_string(size_v) + " bd" + std::to_string(bit_depth);
}

std::vector<TransformSpec> all_legal_specs(int bit_depth) {
  std::vector<TransformSpec> specs;
  for (auto kh : kAllKinds)
    for (auto kv : kAllKinds)
      for (int h : kAllOrders)
        for (int v : kAllOrders) {
          TransformSpec s{kh, kv, h, v, bit_depth};
          if (s.is_legal()) specs.push_back(s);
        }
  return specs;
}

int retained_count(TransformKind kind, int n) {
  require_valid_order(kind, n);
  if (kind == TransformKind::DCT2) return n == 64 ? 32 : n;
  return n == 32 ? 16 : n;
}

std::vector<std::int32_t> retained_prefix(TransformKind kind, int n,
                                          std::span<const std::int32_t> full) {
  if (static_cast<int>(full.size()) != n) throw DomainError("full-length vector must hold n values");
  const int keep = retained_count(kind, n);
  for (int i = keep; i < n; ++i)
    if (full[static_cast<std::size_t>(i)] != 0)
      throw DomainError("nonzero coefficient in the zeroed high-frequency region");
  return {full.begin(), full.begin() + keep};
}

void inverse_1d_matrix(TransformKind kind, int n, std::span<const std::int32_t> coeffs, int shift,
                       std::span<std::int32_t> out) {
  check_inputs(kind, n, coeffs, shift, out);
  const CoeffMatrix& m = integer_matrix(kind, n);
  std::array<std::int64_t, kMaxOrder> sums{};
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const std::int64_t x = coeffs[i];
    const auto row = m.row(static_cast<int>(i));
    for (int j = 0; j < n; ++j) sums[static_cast<std::size_t>(j)] += x * row[static_cast<std::size_t>(j)];
  }
  finish(std::span(sums).first(static_cast<std::size_t>(n)), shift, out);
}

std::vector<std::int32_t> inverse_1d_matrix(TransformKind kind, int n,
                                            std::span<const std::int32_t> coeffs, int shift) {
  std::vector<std::int32_t> out(static_cast<std::size_t>(std::max(n, 0)));
  inverse_1d_matrix(kind, n, coeffs, shift, out);
  return out;
}

void inverse_dct2_butterfly(int n, std::span<const std::int32_t> coeffs, int shift,
                            std::span<std::int32_t> out) {
  check_inputs(TransformKind::DCT2, n, coeffs, shift, out);
  std::array<std::int64_t, kMaxOrder> sums{};
  dct2_partial(n, coeffs.data(), static_cast<int>(coeffs.size()), 1, sums.data());
  finish(std::span(sums).first(static_cast<std::size_t>(n)), shift, out);
}

std::vector<std::int32_t> inverse_dct2_butterfly(int n, std::span<const std::int32_t> coeffs,
                                                 int shift) {
  std::vector<std::int32_t> out(static_cast<std::size_t>(std::max(n, 0)));
  inverse_dct2_butterfly(n, coeffs, shift, out);
  return out;
}

void inverse_mts_shared(TransformKind kind, int n, std::span<const std::int32_t> coeffs, int shift,
                        std::span<std::int32_t> out) {
  if (kind == TransformKind::DCT2) throw DomainError("shared kernel serves DST7 and DCT8 only");
  check_inputs(kind, n, coeffs, shift, out);
  const bool dct8 = kind == TransformKind::DCT8;
  const CoeffMatrix& s7 = integer_matrix(TransformKind::DST7, n);
  std::array<std::int64_t, kMaxOrder> kernel{};
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    // Pre-processing: Gamma flips the sign of odd-indexed inputs.
    const std::int64_t x = (dct8 && (i & 1)) ? -std::int64_t{coeffs[i]} : coeffs[i];
    const auto row = s7.row(static_cast<int>(i));
    for (int j = 0; j < n; ++j) kernel[static_cast<std::size_t>(j)] += x * row[static_cast<std::size_t>(j)];
  }
  std::array<std::int64_t, kMaxOrder> sums{};
  for (int j = 0; j < n; ++j)
    // Post-processing: Lambda reverses the output order.
    sums[static_cast<std::size_t>(j)] = kernel[static_cast<std::size_t>(dct8 ? n - 1 - j : j)];
  finish(std::span(sums).first(static_cast<std::size_t>(n)), shift, out);
}

std::vector<std::int32_t> inverse_mts_shared(TransformKind kind, int n,
                                             std::span<const std::int32_t> coeffs, int shift) {
  std::vector<std::int32_t> out(static_cast<std::size_t>(std::max(n, 0)));
  inverse_mts_shared(kind, n, coeffs, shift, out);
  return out;
}

void inverse_1d(TransformKind kind, int n, std::span<const std::int32_t> coeffs, int shift,
                std::span<std::int32_t> out) {
  if (kind == TransformKind::DCT2)
    inverse_dct2_butterfly(n, coeffs, shift, out);
  else
    inverse_mts_shared(kind, n, coeffs, shift, out);
}

std::vector<std::int32_t> forward_1d(TransformKind kind, int n,
                                     std::span<const std::int32_t> samples, int shift) {
  require_valid_order(kind, n);
  if (static_cast<int>(samples.size()) != n) throw DomainError("forward input must hold n samples");
  if (shift < 0 || shift > 31) throw DomainError("shift out of range");
  const CoeffMatrix& m = integer_matrix(kind, n);
  const int keep = retained_count(kind, n);
  std::vector<std::int32_t> out(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < keep; ++i) {
    std::int64_t acc = 0;
    const auto row = m.row(i);
    for (int j = 0; j < n; ++j) acc += std::int64_t{row[static_cast<std::size_t>(j)]} * samples[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] = clip16(round_shift(acc, shift));
  }
  return out;
}

Block expand_coefficients(const TransformSpec& spec, const Block& coeffs) {
  spec.validate();
  const int w = spec.size_h;
  const int h = spec.size_v;
  const int rw = retained_count(spec.kind_h, w);
  const int rh = retained_count(spec.kind_v, h);
  if (coeffs.samples.size() != static_cast<std::size_t>(coeffs.width) * static_cast<std::size_t>(coeffs.height))
    throw DomainError("coefficient block sample count does not match its dimensions");
  Block full = Block::zeros(w, h, 16);
  if (coeffs.width == w && coeffs.height == h) {
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c) {
        const int v = coeffs.at(r, c);
        if ((r >= rh || c >= rw) && v != 0)
          throw DomainError("nonzero coefficient in the zeroed high-frequency region");
        full.at(r, c) = v;
      }
  } else if (coeffs.width == rw && coeffs.height == rh) {
    for (int r = 0; r < rh; ++r)
      for (int c = 0; c < rw; ++c) full.at(r, c) = coeffs.at(r, c);
  } else {
    throw DomainError("coefficient block is " + std::to_string(coeffs.width) + "x" +
                      std::to_string(coeffs.height) + ", spec expects " + std::to_string(w) + "x" +
                      std::to_string(h) + " or retained " + std::to_string(rw) + "x" +
                      std::to_string(rh));
  }
  for (auto v : full.samples)
    if (v < kCoeffMin || v > kCoeffMax) throw DomainError("coefficient exceeds 16-bit range");
  return full;
}

namespace {

void note_clip(TransformStats* stats, std::span<const std::int64_t> sums, int shift) {
  if (!stats) return;
  for (auto s : sums) {
    const std::int64_t v = round_shift(s, shift);
    stats->max_abs_unclipped = std::max(stats->max_abs_unclipped, v < 0 ? -v : v);
    if (v < kCoeffMin || v > kCoeffMax) ++stats->clip_count;
  }
}

// Same arithmetic as inverse_1d, additionally reporting clip engagement.
void inverse_stage(TransformKind kind, int n, std::span<const std::int32_t> in, int shift,
                   std::span<std::int32_t> out, TransformStats* stats) {
  inverse_1d(kind, n, in, shift, out);
  if (!stats) return;
  // Recompute unclipped sums with the matrix path for instrumentation only.
  const CoeffMatrix& m = integer_matrix(kind, n);
  std::array<std::int64_t, kMaxOrder> sums{};
  for (std::size_t i = 0; i < in.size(); ++i)
    for (int j = 0; j < n; ++j) sums[static_cast<std::size_t>(j)] += std::int64_t{in[i]} * m.at(static_cast<int>(i), j);
  note_clip(stats, std::span(sums).first(static_cast<std::size_t>(n)), shift);
}

}  // namespace

Block inverse_2d(const TransformSpec& spec, const Block& coeffs, TransformStats* stats) {
  const Block full = expand_coefficients(spec, coeffs);
  const int w = spec.size_h;
  const int h = spec.size_v;
  const int rw = retained_count(spec.kind_h, w);
  const int rh = retained_count(spec.kind_v, h);

  // Vertical stage into the transposed intermediate (row c holds column c).
  std::vector<std::int32_t> inter(static_cast<std::size_t>(w * h), 0);
  std::array<std::int32_t, kMaxOrder> in{};
  std::array<std::int32_t, kMaxOrder> out{};
  for (int c = 0; c < w; ++c) {
    for (int r = 0; r < rh; ++r) in[static_cast<std::size_t>(r)] = full.at(r, c);
    inverse_stage(spec.kind_v, h, std::span(in).first(static_cast<std::size_t>(rh)), kInverseShiftStage1,
                  std::span(out).first(static_cast<std::size_t>(h)), stats);
    for (int r = 0; r < h; ++r) inter[static_cast<std::size_t>(r * w + c)] = out[static_cast<std::size_t>(r)];
  }

  Block res = Block::zeros(w, h, 16);
  for (int r = 0; r < h; ++r) {
    for (int c = rw; c < w; ++c)
      if (inter[static_cast<std::size_t>(r * w + c)] != 0)
        throw DomainError("internal: zeroed column produced nonzero intermediate");
    inverse_stage(spec.kind_h, w,
                  std::span<const std::int32_t>(inter.data() + static_cast<std::size_t>(r * w), static_cast<std::size_t>(rw)),
                  spec.shift_stage2(), std::span(out).first(static_cast<std::size_t>(w)), stats);
    for (int c = 0; c < w; ++c) res.at(r, c) = out[static_cast<std::size_t>(c)];
  }
  return res;
}

Block forward_2d(const TransformSpec& spec, const Block& residual, TransformStats* stats) {
  spec.validate();
  const int w = spec.size_h;
  const int h = spec.size_v;
  if (residual.width != w || residual.height != h)
    throw DomainError("residual block dimensions do not match the transform size");
  const int shift1 = log2_order(h) + spec.bit_depth - 9;
  const int shift2 = log2_order(w) + 6;

  Block tmp = Block::zeros(w, h, 16);
  std::vector<std::int32_t> col(static_cast<std::size_t>(h));
  for (int c = 0; c < w; ++c) {
    for (int r = 0; r < h; ++r) col[static_cast<std::size_t>(r)] = residual.at(r, c);
    const auto f = forward_1d(spec.kind_v, h, col, shift1);
    for (int r = 0; r < h; ++r) tmp.at(r, c) = f[static_cast<std::size_t>(r)];
  }
  Block out = Block::zeros(w, h, 16);
  std::vector<std::int32_t> row(static_cast<std::size_t>(w));
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) row[static_cast<std::size_t>(c)] = tmp.at(r, c);
    const auto f = forward_1d(spec.kind_h, w, row, shift2);
    for (int c = 0; c < w; ++c) out.at(r, c) = f[static_cast<std::size_t>(c)];
  }
  if (stats) {
    for (auto v : out.samples)
      stats->max_abs_unclipped = std::max<std::int64_t>(stats->max_abs_unclipped, std::abs(v));
  }
  return out;
}

}  // namespace mts
