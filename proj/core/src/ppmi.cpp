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

#include "afford/ppmi.hpp"

#include <cmath>
#include <vector>

#include "afford/error.hpp"

namespace afford {

LabeledMatrix ppmi(const LabeledMatrix& counts, PpmiStats* stats) {
  const int m = counts.rows.size();
  const int n = counts.cols.size();

  Eigen::VectorXd row_sum = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd col_sum = Eigen::VectorXd::Zero(n);
  double total = 0.0;
  for (int i = 0; i < counts.values.outerSize(); ++i) {
    for (SparseMat::InnerIterator it(counts.values, i); it; ++it) {
      if (it.value() < 0.0) {
        throw Error("negative count at " + counts.rows.at(it.row()) + "/" +
                    counts.cols.at(it.col()));
      }
      row_sum[it.row()] += it.value();
      col_sum[it.col()] += it.value();
      total += it.value();
    }
  }
  if (total <= 0.0) throw Error("count matrix has no observations");

  if (stats) {
    stats->total = total;
    stats->zero_rows = static_cast<int>((row_sum.array() == 0.0).count());
    stats->zero_cols = static_cast<int>((col_sum.array() == 0.0).count());
  }

  std::vector<Eigen::Triplet<double>> triplets;
  for (int i = 0; i < counts.values.outerSize(); ++i) {
    for (SparseMat::InnerIterator it(counts.values, i); it; ++it) {
      if (it.value() == 0.0) continue;  // explicit zeros carry no signal
      const double assoc =
          std::log(it.value() * total / (row_sum[it.row()] * col_sum[it.col()]));
      if (assoc > 0.0) {
        triplets.emplace_back(it.row(), it.col(), assoc);
        if (stats) ++stats->kept;
      } else if (stats) {
        ++stats->clipped;
      }
    }
  }

  LabeledMatrix out{counts.rows, counts.cols, SparseMat(m, n)};
  out.values.setFromTriplets(triplets.begin(), triplets.end());
  out.values.makeCompressed();
  return out;
}

}  // namespace afford
