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

#include <Eigen/SparseCore>
#include <filesystem>
#include <string>

#include "afford/vocab.hpp"

namespace afford {

using SparseMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Sparse noun-by-verb matrix carrying its two vocabularies. Rows follow
/// the noun vocabulary order, columns the verb vocabulary order, including
/// entries whose row or column is entirely zero.
struct LabeledMatrix {
  VocabIndex rows;
  VocabIndex cols;
  SparseMat values;

  /// Writes `#rows=<m> cols=<n>`, an optional `#config=<hex>` stamp, then
  /// one `row-label <TAB> col-label <TAB> value` triplet per stored nonzero,
  /// sorted by row then column.
  void save(const std::filesystem::path& path,
            const std::string& config_hash = {}) const;

  /// Reads triplets back, aligning labels against the supplied
  /// vocabularies. Labels missing from a vocabulary, duplicate cells, and
  /// malformed headers are reported with line numbers.
  static LabeledMatrix load(const std::filesystem::path& path,
                            VocabIndex rows, VocabIndex cols);
};

}  // namespace afford
