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

#include "mtskit/coeff.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <numbers>

namespace mts {

namespace {

// Unique magnitudes of the standardized DCT-II tables, indexed by the cosine
// argument k in units of pi/128. Every n-point matrix embeds in the 64-point
// one: M_n[i][j] = M_64[i * 64 / n][j].
constexpr std::array<std::int16_t, 65> build_dct2_cos() {
  std::array<std::int16_t, 65> t{};
  t[0] = 64;
  t[32] = 64;
  t[16] = 83;
  t[48] = 36;
  constexpr std::int16_t o8[] = {89, 75, 50, 18};
  constexpr std::int16_t o16[] = {90, 87, 80, 70, 57, 43, 25, 9};
  constexpr std::int16_t o32[] = {90, 90, 88, 85, 82, 78, 73, 67, 61, 54, 46, 38, 31, 22, 13, 4};
  constexpr std::int16_t o64[] = {91, 90, 90, 90, 88, 87, 86, 84, 83, 81, 79, 77, 73, 71, 69, 65,
                                  62, 59, 56, 52, 48, 44, 41, 37, 33, 28, 24, 20, 15, 11, 7,  2};
  for (int r = 0; r < 4; ++r) t[static_cast<std::size_t>(8 * (2 * r + 1))] = o8[r];
  for (int r = 0; r < 8; ++r) t[static_cast<std::size_t>(4 * (2 * r + 1))] = o16[r];
  for (int r = 0; r < 16; ++r) t[static_cast<std::size_t>(2 * (2 * r + 1))] = o32[r];
  for (int r = 0; r < 32; ++r) t[static_cast<std::size_t>(2 * r + 1)] = o64[r];
  t[64] = 0;
  return t;
}

constexpr auto kDct2Table = build_dct2_cos();

// Unique magnitudes of the standardized DST-VII tables: entry k approximates
// scale * sin(k * pi / (2n + 1)) for k = 1..n.
constexpr std::int16_t kDst7P4[] = {29, 55, 74, 84};
constexpr std::int16_t kDst7P8[] = {17, 32, 46, 60, 71, 78, 85, 86};
constexpr std::int16_t kDst7P16[] = {8, 17, 25, 33, 40, 48, 55, 62, 68, 73, 77, 81, 85, 87, 88, 88};
constexpr std::int16_t kDst7P32[] = {4,  9,  13, 17, 21, 26, 30, 34, 38, 42, 46, 50, 53, 56, 60, 63,
                                     66, 68, 72, 74, 77, 78, 80, 82, 84, 85, 86, 87, 88, 89, 90, 90};

std::span<const std::int16_t> dst7_table(int n) {
  switch (n) {
    case 4: return kDst7P4;
    case 8: return kDst7P8;
    case 16: return kDst7P16;
    default: return kDst7P32;
  }
}

int dct2_entry(int n, int i, int j) {
  if (i == 0) return kDct2Table[0];
  // cos(pi * i * (2j + 1) / (2n)) == cos(pi * k / 128) with k below.
  int k = (i * (64 / n) * (2 * j + 1)) % 256;
  if (k > 128) k = 256 - k;
  if (k > 64) return -kDct2Table[static_cast<std::size_t>(128 - k)];
  return kDct2Table[static_cast<std::size_t>(k)];
}

int dst7_entry(int n, int i, int j) {
  // sin(pi * k / p) with p = 2n + 1, period 2p.
  const int p = 2 * n + 1;
  int k = ((2 * i + 1) * (j + 1)) % (2 * p);
  int sign = 1;
  if (k >= p) {
    k -= p;
    sign = -1;
  }
  if (k > n) k = p - k;
  if (k == 0) return 0;
  return sign * dst7_table(n)[static_cast<std::size_t>(k - 1)];
}

CoeffMatrix build_standard(TransformKind kind, int n) {
  std::vector<std::int16_t> e(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      int v = 0;
      switch (kind) {
        case TransformKind::DCT2: v = dct2_entry(n, i, j); break;
        case TransformKind::DST7: v = dst7_entry(n, i, j); break;
        // DCT-VIII rows are DST-VII rows reversed with alternating sign.
        case TransformKind::DCT8: v = (i % 2 ? -1 : 1) * dst7_entry(n, i, n - 1 - j); break;
      }
      e[static_cast<std::size_t>(i * n + j)] = static_cast<std::int16_t>(v);
    }
  }
  return CoeffMatrix(kind, n, std::move(e), CoeffMatrix::Provenance::Standard);
}

}  // namespace

std::string_view to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::DCT2: return "DCT2";
    case TransformKind::DCT8: return "DCT8";
    case TransformKind::DST7: return "DST7";
  }
  return "?";
}

std::optional<TransformKind> kind_from_code(int tr_type) {
  switch (tr_type) {
    case 0: return TransformKind::DCT2;
    case 1: return TransformKind::DCT8;
    case 2: return TransformKind::DST7;
    default: return std::nullopt;
  }
}

std::optional<TransformKind> parse_kind(std::string_view text) {
  std::string lower(text);
  for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "dct2" || lower == "dct-ii" || lower == "0") return TransformKind::DCT2;
  if (lower == "dct8" || lower == "dct-viii" || lower == "1") return TransformKind::DCT8;
  if (lower == "dst7" || lower == "dst-vii" || lower == "2") return TransformKind::DST7;
  return std::nullopt;
}

bool is_valid_order(TransformKind kind, int n) {
  if (n != 4 && n != 8 && n != 16 && n != 32 && n != 64) return false;
  return kind == TransformKind::DCT2 || n <= 32;
}

void require_valid_order(TransformKind kind, int n) {
  if (!is_valid_order(kind, n)) {
    throw DomainError(std::string("invalid transform order ") + std::to_string(n) + " for " +
                      std::string(to_string(kind)));
  }
}

int log2_order(int n) {
  int l = 0;
  while ((1 << l) < n) ++l;
  return l;
}

double basis_value(TransformKind kind, int n, int i, int j) {
  require_valid_order(kind, n);
  if (i < 0 || j < 0 || i >= n || j >= n) throw DomainError("basis index out of range");
  const double pi = std::numbers::pi;
  const double nn = n;
  switch (kind) {
    case TransformKind::DCT2: {
      const double w = i == 0 ? std::sqrt(0.5) : 1.0;
      return w * std::sqrt(2.0 / nn) * std::cos(pi * i * (2.0 * j + 1.0) / (2.0 * nn));
    }
    case TransformKind::DST7:
      return std::sqrt(4.0 / (2.0 * nn + 1.0)) *
             std::sin(pi * (2.0 * i + 1.0) * (j + 1.0) / (2.0 * nn + 1.0));
    case TransformKind::DCT8:
      return std::sqrt(4.0 / (2.0 * nn + 1.0)) *
             std::cos(pi * (2.0 * i + 1.0) * (2.0 * j + 1.0) / (4.0 * nn + 2.0));
  }
  return 0.0;
}

CoeffMatrix::CoeffMatrix(TransformKind kind, int n, std::vector<std::int16_t> entries,
                         Provenance provenance)
    : kind_(kind), n_(n), provenance_(provenance), entries_(std::move(entries)) {
  require_valid_order(kind, n);
  if (entries_.size() != static_cast<std::size_t>(n * n)) {
    throw DomainError("coefficient matrix entry count does not match its order");
  }
  for (auto v : entries_) {
    if (v < -128 || v > 127) throw DomainError("coefficient outside the signed 8-bit range");
  }
}

double CoeffMatrix::scale() const { return 64.0 * std::sqrt(static_cast<double>(n_)); }

double CoeffMatrix::scale_log2() const { return 6.0 + 0.5 * log2_order(n_); }

std::vector<std::int16_t> CoeffMatrix::transposed() const {
  std::vector<std::int16_t> t(entries_.size());
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      t[static_cast<std::size_t>(j * n_ + i)] = entries_[static_cast<std::size_t>(i * n_ + j)];
  return t;
}

const CoeffMatrix& integer_matrix(TransformKind kind, int n) {
  require_valid_order(kind, n);
  // Index: kind code * 5 + log2(n) - 2. DST7/DCT8 slots for n = 64 stay empty.
  static const std::vector<std::optional<CoeffMatrix>> cache = [] {
    std::vector<std::optional<CoeffMatrix>> c(15);
    for (auto k : kAllKinds)
      for (int order : kAllOrders)
        if (is_valid_order(k, order))
          c[static_cast<std::size_t>(static_cast<int>(k) * 5 + log2_order(order) - 2)] =
              build_standard(k, order);
    return c;
  }();
  return *cache[static_cast<std::size_t>(static_cast<int>(kind) * 5 + log2_order(n) - 2)];
}

PermSignPair PermSignPair::make(int n) {
  if (n <= 0) throw DomainError("permutation order must be positive");
  PermSignPair p;
  p.n = n;
  p.lambda.assign(static_cast<std::size_t>(n * n), 0);
  p.gamma.assign(static_cast<std::size_t>(n * n), 0);
  for (int i = 0; i < n; ++i) {
    p.lambda[static_cast<std::size_t>(i * n + (n - 1 - i))] = 1;
    p.gamma[static_cast<std::size_t>(i * n + i)] = static_cast<std::int8_t>(i % 2 ? -1 : 1);
  }
  return p;
}

CoeffMatrix dct8_from_dst7(const CoeffMatrix& s7) {
  if (s7.kind() != TransformKind::DST7) throw DomainError("dct8_from_dst7 expects a DST7 matrix");
  const int n = s7.n();
  const auto ps = PermSignPair::make(n);
  const auto s7t = s7.transposed();
  // C8^T = Lambda * S7^T * Gamma, evaluated as full matrix products.
  std::vector<int> tmp(static_cast<std::size_t>(n * n), 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int acc = 0;
      for (int k = 0; k < n; ++k) acc += ps.lambda_at(i, k) * s7t[static_cast<std::size_t>(k * n + j)];
      tmp[static_cast<std::size_t>(i * n + j)] = acc;
    }
  std::vector<std::int16_t> c8(static_cast<std::size_t>(n * n), 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int acc = 0;
      for (int k = 0; k < n; ++k) acc += tmp[static_cast<std::size_t>(i * n + k)] * ps.gamma_at(k, j);
      // acc is C8^T[i][j]; store the untransposed C8[j][i].
      c8[static_cast<std::size_t>(j * n + i)] = static_cast<std::int16_t>(acc);
    }
  return CoeffMatrix(TransformKind::DCT8, n, std::move(c8), CoeffMatrix::Provenance::DerivedFromDst7);
}

}  // namespace mts
