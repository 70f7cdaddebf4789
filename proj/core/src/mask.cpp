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

#include "afford/mask.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "afford/error.hpp"
#include "afford/rng.hpp"

namespace afford {
namespace {

// Shuffle 0..count-1 and deal into K groups; the first count%K groups get
// the extra element, so sizes differ by at most one.
std::vector<int> balanced_partition(int count, int K, rng::Engine& eng) {
  std::vector<int> order(count);
  for (int i = 0; i < count; ++i) order[i] = i;
  rng::shuffle(order, eng);

  std::vector<int> group(count);
  const int base = count / K;
  const int extra = count % K;
  int pos = 0;
  for (int g = 0; g < K; ++g) {
    const int size = base + (g < extra ? 1 : 0);
    for (int s = 0; s < size; ++s) group[order[pos++]] = g;
  }
  return group;
}

}  // namespace

bool HoldoutMask::is_validation(int i, int j) const {
  const int g = row_group[i];
  if (g != col_group[j]) return false;
  return std::find(held_out.begin(), held_out.end(), g) != held_out.end();
}

Eigen::MatrixXd HoldoutMask::validation_matrix() const {
  const int m = static_cast<int>(row_group.size());
  const int n = static_cast<int>(col_group.size());
  Eigen::MatrixXd mv = Eigen::MatrixXd::Zero(m, n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      if (is_validation(i, j)) mv(i, j) = 1.0;
    }
  }
  return mv;
}

Eigen::MatrixXd HoldoutMask::training_matrix() const {
  const int m = static_cast<int>(row_group.size());
  const int n = static_cast<int>(col_group.size());
  return Eigen::MatrixXd::Ones(m, n) - validation_matrix();
}

std::size_t HoldoutMask::validation_count() const {
  std::size_t count = 0;
  for (std::size_t i = 0; i < row_group.size(); ++i) {
    for (std::size_t j = 0; j < col_group.size(); ++j) {
      if (is_validation(static_cast<int>(i), static_cast<int>(j))) ++count;
    }
  }
  return count;
}

HoldoutMask make_block_masks(int m, int n, int K, int q, std::uint64_t seed) {
  if (K < 2) throw ConfigError("mask needs K >= 2, got K=" + std::to_string(K));
  if (q < 1 || q >= K) {
    throw ConfigError("mask needs 1 <= q < K, got q=" + std::to_string(q) +
                      " K=" + std::to_string(K));
  }
  if (m < K || n < K) {
    throw ConfigError("matrix " + std::to_string(m) + "x" + std::to_string(n) +
                      " too small for K=" + std::to_string(K) + " groups");
  }

  HoldoutMask mask;
  mask.K = K;
  mask.q = q;
  mask.seed = seed;
  rng::Engine row_eng(rng::mix(seed, 1));
  rng::Engine col_eng(rng::mix(seed, 2));
  rng::Engine pick_eng(rng::mix(seed, 3));
  mask.row_group = balanced_partition(m, K, row_eng);
  mask.col_group = balanced_partition(n, K, col_eng);
  mask.held_out = rng::sample_without_replacement(pick_eng, K, q);
  std::sort(mask.held_out.begin(), mask.held_out.end());
  return mask;
}

MaskSpec MaskSpec::all_ones() { return MaskSpec{}; }

MaskSpec MaskSpec::block(HoldoutMask mask) {
  MaskSpec spec;
  spec.kind_ = Kind::kBlock;
  spec.block_ = std::move(mask);
  return spec;
}

MaskSpec MaskSpec::explicit_training(Eigen::MatrixXd m_t) {
  MaskSpec spec;
  spec.kind_ = Kind::kExplicit;
  spec.explicit_ = std::move(m_t);
  return spec;
}

Eigen::MatrixXd MaskSpec::training(int m, int n) const {
  switch (kind_) {
    case Kind::kAllOnes:
      return Eigen::MatrixXd::Ones(m, n);
    case Kind::kBlock: {
      if (static_cast<int>(block_.row_group.size()) != m ||
          static_cast<int>(block_.col_group.size()) != n) {
        throw Error("mask shape " + std::to_string(block_.row_group.size()) +
                    "x" + std::to_string(block_.col_group.size()) +
                    " does not match matrix " + std::to_string(m) + "x" +
                    std::to_string(n));
      }
      return block_.training_matrix();
    }
    case Kind::kExplicit: {
      if (explicit_.rows() != m || explicit_.cols() != n) {
        throw Error("mask shape " + std::to_string(explicit_.rows()) + "x" +
                    std::to_string(explicit_.cols()) +
                    " does not match matrix " + std::to_string(m) + "x" +
                    std::to_string(n));
      }
      return explicit_;
    }
  }
  throw Error("unreachable mask kind");
}

}  // namespace afford
