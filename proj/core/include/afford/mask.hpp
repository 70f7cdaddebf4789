// Copyright 2026 afford contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace afford {

/// Block hold-out pattern over an m×n matrix. Rows and columns are
/// independently partitioned into K balanced groups; a cell is held out
/// exactly when its row group equals its column group and that id was
/// drawn. Training and validation cells are complementary by construction.
struct HoldoutMask {
  std::vector<int> row_group;   // length m, values in [0, K)
  std::vector<int> col_group;   // length n
  std::vector<int> held_out;    // q distinct group ids
  int K = 0;
  int q = 0;
  std::uint64_t seed = 0;

  bool is_validation(int i, int j) const;
  Eigen::MatrixXd validation_matrix() const;  // M_v as dense 0/1
  Eigen::MatrixXd training_matrix() const;    // 1 - M_v
  std::size_t validation_count() const;
};

/// Deterministic balanced partition: indices are shuffled with the seed and
/// dealt into K groups whose sizes differ by at most one, then q held-out
/// ids are drawn without replacement. Throws afford::ConfigError when
/// K < 2, q is outside [1, K), or either dimension is smaller than K.
HoldoutMask make_block_masks(int m, int n, int K, int q, std::uint64_t seed);

/// Where a fit reads its training/validation weights from. Factorization
/// accepts every-cell-trains (no hold-out), a block mask, or an arbitrary
/// dense 0/1 training matrix supplied by the caller.
class MaskSpec {
 public:
  static MaskSpec all_ones();
  static MaskSpec block(HoldoutMask mask);
  static MaskSpec explicit_training(Eigen::MatrixXd m_t);

  /// Dense training weights for an m×n problem. Validates stored shape.
  Eigen::MatrixXd training(int m, int n) const;
  bool is_all_ones() const { return kind_ == Kind::kAllOnes; }

 private:
  enum class Kind { kAllOnes, kBlock, kExplicit };
  Kind kind_ = Kind::kAllOnes;
  HoldoutMask block_;
  Eigen::MatrixXd explicit_;
};

}  // namespace afford
