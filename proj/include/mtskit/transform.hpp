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

// Bit-exact integer inverse transforms (and forward transforms for testing).
//
// 1-D stage semantics, shared by every path:
//   out[j] = clip16((sum_i coeffs[i] * M[i][j] + round) >> shift)
// with round = 1 << (shift - 1) for shift > 0 and 0 otherwise. Only the first
// retained_count(kind, n) coefficients take part.
//
// 2-D inverse: vertical stage over columns with shift 7, then horizontal stage
// over rows with shift 20 - bit_depth. Both stages clip to 16 bits.

#ifndef MTSKIT_TRANSFORM_HPP_
#define MTSKIT_TRANSFORM_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mtskit/coeff.hpp"

namespace mts {

inline constexpr int kCoeffMin = -32768;
inline constexpr int kCoeffMax = 32767;
inline constexpr int kInverseShiftStage1 = 7;

inline constexpr int clip16(std::int64_t v) {
  return static_cast<int>(v < kCoeffMin ? kCoeffMin : (v > kCoeffMax ? kCoeffMax : v));
}

inline constexpr std::int64_t round_shift(std::int64_t v, int shift) {
  return shift > 0 ? (v + (std::int64_t{1} << (shift - 1))) >> shift : v;
}

/// Rectangular sample array, row-major. `width` runs along rows (horizontal
/// transform direction), `height` along columns.
struct Block {
  int width = 0;
  int height = 0;
  int bit_width = 16;
  std::vector<std::int32_t> samples;

  static Block zeros(int width, int height, int bit_width = 16);

  int at(int row, int col) const { return samples[static_cast<std::size_t>(row * width + col)]; }
  std::int32_t& at(int row, int col) { return samples[static_cast<std::size_t>(row * width + col)]; }
  /// Throws DomainError if the shape is illegal or a sample exceeds bit_width.
  void validate() const;
  bool operator==(const Block& other) const = default;
};

/// 2-D transform configuration.
struct TransformSpec {
  TransformKind kind_h = TransformKind::DCT2;
  TransformKind kind_v = TransformKind::DCT2;
  int size_h = 4;  // block width
  int size_v = 4;  // block height
  int bit_depth = 8;

  /// DCT-II in either direction forces DCT-II in both; DST-VII/DCT-VIII
  /// are limited to 32 points; bit_depth is 8 or 10.
  bool is_legal() const;
  void validate() const;
  int shift_stage2() const { return 20 - bit_depth; }
  std::string label() const;
  bool operator==(const TransformSpec& other) const = default;
};

/// Every legal (kind_h, kind_v, size_h, size_v) combination at `bit_depth`.
std::vector<TransformSpec> all_legal_specs(int bit_depth);

/// Number of low-frequency coefficients that survive zero-out.
int retained_count(TransformKind kind, int n);

/// Returns the retained prefix of a full-length coefficient vector. Nonzero
/// values in the zeroed tail are rejected with DomainError.
std::vector<std::int32_t> retained_prefix(TransformKind kind, int n,
                                          std::span<const std::int32_t> full);

/// Generic matrix path: one separable inverse stage, M^T * coeffs.
std::vector<std::int32_t> inverse_1d_matrix(TransformKind kind, int n,
                                            std::span<const std::int32_t> coeffs, int shift);
void inverse_1d_matrix(TransformKind kind, int n, std::span<const std::int32_t> coeffs,
                       int shift, std::span<std::int32_t> out);

/// Recursive even/odd decomposition of the inverse DCT-II.
std::vector<std::int32_t> inverse_dct2_butterfly(int n, std::span<const std::int32_t> coeffs,
                                                 int shift);
void inverse_dct2_butterfly(int n, std::span<const std::int32_t> coeffs, int shift,
                            std::span<std::int32_t> out);

/// DST-VII kernel; DCT-VIII runs through the same kernel with the input signs
/// alternated and the output order reversed.
std::vector<std::int32_t> inverse_mts_shared(TransformKind kind, int n,
                                             std::span<const std::int32_t> coeffs, int shift);
void inverse_mts_shared(TransformKind kind, int n, std::span<const std::int32_t> coeffs,
                        int shift, std::span<std::int32_t> out);

/// Fast path per kind (butterfly for DCT-II, shared kernel otherwise).
void inverse_1d(TransformKind kind, int n, std::span<const std::int32_t> coeffs, int shift,
                std::span<std::int32_t> out);

/// Forward stage out[i] = clip16(round(sum_j M[i][j] * x[j]) >> shift) for the
/// retained outputs; zeroed outputs are 0. Test support only.
std::vector<std::int32_t> forward_1d(TransformKind kind, int n,
                                     std::span<const std::int32_t> samples, int shift);

struct TransformStats {
  std::int64_t clip_count = 0;
  std::int64_t max_abs_unclipped = 0;
};

/// Inverse 2-D transform. `coeffs` is either the full block or only its
/// retained top-left region; a nonzero coefficient in the zeroed region is
/// rejected.
Block inverse_2d(const TransformSpec& spec, const Block& coeffs, TransformStats* stats = nullptr);

/// Forward 2-D transform used for round-trip testing. Vertical stage first
/// with shift log2(height) + bit_depth - 9, then horizontal with shift
/// log2(width) + 6.
Block forward_2d(const TransformSpec& spec, const Block& residual, TransformStats* stats = nullptr);

/// Expands a retained-region block to full size, validating the zero region.
Block expand_coefficients(const TransformSpec& spec, const Block& coeffs);

}  // namespace mts

#endif  // MTSKIT_TRANSFORM_HPP_
