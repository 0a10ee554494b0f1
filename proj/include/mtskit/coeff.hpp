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

#ifndef MTSKIT_COEFF_HPP_
#define MTSKIT_COEFF_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mts {

/// Raised for invalid (kind, order) combinations and malformed arguments.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Transform type, encoded as the `tr_type` port value.
enum class TransformKind : std::uint8_t { DCT2 = 0, DCT8 = 1, DST7 = 2 };

inline constexpr TransformKind kAllKinds[] = {TransformKind::DCT2, TransformKind::DCT8,
                                               TransformKind::DST7};
inline constexpr int kAllOrders[] = {4, 8, 16, 32, 64};

std::string_view to_string(TransformKind kind);
/// Accepts "dct2"/"DCT2"/"0", "dct8"/"1", "dst7"/"2".
std::optional<TransformKind> parse_kind(std::string_view text);
std::optional<TransformKind> kind_from_code(int tr_type);

/// True for legal (kind, n): DCT-II up to 64 points, DST-VII/DCT-VIII up to 32.
bool is_valid_order(TransformKind kind, int n);
void require_valid_order(TransformKind kind, int n);
int log2_order(int n);

/// Real-valued basis function (row i = frequency, column j = sample).
/// Test support only; production paths use integer matrices.
double basis_value(TransformKind kind, int n, int i, int j);

/// An n x n integer transform matrix. Row i holds basis function i, so the
/// forward transform is M * x and the inverse is M^T * y.
class CoeffMatrix {
 public:
  enum class Provenance : std::uint8_t { Standard, DerivedFromDst7 };

  CoeffMatrix(TransformKind kind, int n, std::vector<std::int16_t> entries,
              Provenance provenance);

  TransformKind kind() const { return kind_; }
  int n() const { return n_; }
  Provenance provenance() const { return provenance_; }
  int at(int i, int j) const { return entries_[static_cast<std::size_t>(i * n_ + j)]; }
  std::span<const std::int16_t> row(int i) const {
    return {entries_.data() + static_cast<std::size_t>(i * n_), static_cast<std::size_t>(n_)};
  }
  std::span<const std::int16_t> entries() const { return entries_; }

  /// Numeric scale applied to the real basis: 2^(6 + log2(n)/2) = 64 * sqrt(n).
  double scale() const;
  double scale_log2() const;
  /// M^T M approximates 2^gram_log2 * I.
  int gram_log2() const { return 12 + log2_order(n_); }

  /// Transpose returned as a plain row-major table.
  std::vector<std::int16_t> transposed() const;

  bool operator==(const CoeffMatrix& other) const {
    return kind_ == other.kind_ && n_ == other.n_ && entries_ == other.entries_;
  }

 private:
  TransformKind kind_;
  int n_;
  Provenance provenance_;
  std::vector<std::int16_t> entries_;
};

/// Standardized integer matrix for (kind, n). The returned reference points at
/// process-lifetime immutable storage.
const CoeffMatrix& integer_matrix(TransformKind kind, int n);

/// Anti-diagonal permutation and alternating-sign diagonal of order n.
struct PermSignPair {
  int n = 0;
  std::vector<std::int8_t> lambda;  // row-major, lambda[i][j] = 1 iff j == n-1-i
  std::vector<std::int8_t> gamma;   // row-major, gamma[i][i] = (-1)^i

  static PermSignPair make(int n);
  int lambda_at(int i, int j) const { return lambda[static_cast<std::size_t>(i * n + j)]; }
  int gamma_at(int i, int j) const { return gamma[static_cast<std::size_t>(i * n + j)]; }
};

/// DCT-VIII matrix obtained from DST-VII as C8^T = Lambda * S7^T * Gamma.
CoeffMatrix dct8_from_dst7(const CoeffMatrix& s7);

}  // namespace mts

#endif  // MTSKIT_COEFF_HPP_
