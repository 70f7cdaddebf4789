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

#include "afford/sparse_matrix.hpp"

namespace afford {

struct PpmiStats {
  double total = 0.0;        // sum over all counts
  int zero_rows = 0;         // rows with no observations (kept, all-zero output)
  int zero_cols = 0;
  std::size_t clipped = 0;   // stored counts whose association was <= 0
  std::size_t kept = 0;      // positive entries in the result
};

/// Positive pointwise mutual information of a count matrix, natural log:
/// out(i,k) = max(ln(c(i,k) * T / (rowsum(i) * colsum(k))), 0).
///
/// Only stored nonzero counts are evaluated, so zero cells never reach the
/// logarithm and rows or columns without observations simply stay zero.
/// Throws afford::Error when the matrix holds no observations at all.
LabeledMatrix ppmi(const LabeledMatrix& counts, PpmiStats* stats = nullptr);

}  // namespace afford
