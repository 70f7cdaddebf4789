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

#include "afford/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "afford/error.hpp"

namespace afford {

SimilarityMatrix similarity_matrix(const FactorPair& fp) {
  const int d = static_cast<int>(fp.O.cols());
  const int n = static_cast<int>(fp.V.rows());
  if (fp.V.cols() != d) {
    throw Error("factor ranks disagree: O has " + std::to_string(d) +
                " columns, V has " + std::to_string(fp.V.cols()));
  }

  // Everything needed for cosines against P~ = O Vᵀ flows through the d×d
  // Gram matrix, so the m×n reconstruction is never formed:
  //   numerator  O_{:,h} · P~_{:,k} = (G Vᵀ)(h, k)
  //   ||O_{:,h}||² = G(h, h)
  //   ||P~_{:,k}||² = V_{k,:} G V_{k,:}ᵀ
  const Eigen::MatrixXd G = fp.O.transpose() * fp.O;
  const Eigen::MatrixXd numer = G * fp.V.transpose();  // d×n
  const Eigen::VectorXd col_sq =
      ((fp.V * G).array() * fp.V.array()).rowwise().sum();  // n

  SimilarityMatrix sim;
  for (int h = 0; h < d; ++h) {
    if (G(h, h) > 0.0) {
      sim.kept_dims.push_back(h);
    } else {
      sim.dropped_dims.push_back(h);
    }
  }

  sim.S.resize(static_cast<int>(sim.kept_dims.size()), n);
  for (std::size_t r = 0; r < sim.kept_dims.size(); ++r) {
    const int h = sim.kept_dims[r];
    const double o_norm = std::sqrt(G(h, h));
    for (int k = 0; k < n; ++k) {
      const double p_norm = std::sqrt(std::max(col_sq[k], 0.0));
      sim.S(static_cast<int>(r), k) =
          (p_norm == 0.0) ? 0.0 : numer(h, k) / (o_norm * p_norm);
    }
  }
  return sim;
}

VerbRanking rank_scores(int object_id, Eigen::VectorXd scores) {
  VerbRanking r;
  r.object_id = object_id;
  r.order.resize(scores.size());
  std::iota(r.order.begin(), r.order.end(), 0);
  std::stable_sort(r.order.begin(), r.order.end(), [&](int a, int b) {
    return scores[a] > scores[b];  // stable sort keeps index order on ties
  });
  r.scores = std::move(scores);
  return r;
}

VerbRanking object_verb_ranking(const FactorPair& fp,
                                const SimilarityMatrix& sim, int i) {
  if (i < 0 || i >= fp.O.rows()) {
    throw Error("object index " + std::to_string(i) + " outside [0, " +
                std::to_string(fp.O.rows()) + ")");
  }
  Eigen::RowVectorXd loadings(sim.kept_dims.size());
  for (std::size_t r = 0; r < sim.kept_dims.size(); ++r) {
    loadings[static_cast<int>(r)] = fp.O(i, sim.kept_dims[r]);
  }
  return rank_scores(i, (loadings * sim.S).transpose());
}

VerbRanking ppmi_row_ranking(const LabeledMatrix& P, int i) {
  if (i < 0 || i >= P.rows.size()) {
    throw Error("object index " + std::to_string(i) + " outside [0, " +
                std::to_string(P.rows.size()) + ")");
  }
  Eigen::VectorXd scores = Eigen::VectorXd::Zero(P.cols.size());
  for (SparseMat::InnerIterator it(P.values, i); it; ++it) {
    scores[it.col()] = it.value();
  }
  return rank_scores(i, std::move(scores));
}

VerbRanking baseline_cosine_ranking(const Eigen::VectorXd& noun_vector,
                                    const Eigen::MatrixXd& verb_vectors,
                                    int object_id) {
  if (verb_vectors.cols() != noun_vector.size()) {
    throw Error("word-vector widths disagree: noun has " +
                std::to_string(noun_vector.size()) + ", verbs have " +
                std::to_string(verb_vectors.cols()));
  }
  const double noun_norm = noun_vector.norm();
  if (noun_norm == 0.0) throw Error("noun vector has zero norm");

  Eigen::VectorXd scores(verb_vectors.rows());
  for (int k = 0; k < verb_vectors.rows(); ++k) {
    const double vn = verb_vectors.row(k).norm();
    scores[k] = (vn == 0.0)
                    ? -std::numeric_limits<double>::infinity()
                    : verb_vectors.row(k).dot(noun_vector) / (vn * noun_norm);
  }
  return rank_scores(object_id, std::move(scores));
}

double aauc(const VerbRanking& ranking, const std::vector<int>& truth) {
  if (truth.empty()) throw Error("empty truth set");
  const int n = static_cast<int>(ranking.order.size());

  std::vector<int> position(n, 0);  // verb index -> 1-based rank
  for (int pos = 0; pos < n; ++pos) position[ranking.order[pos]] = pos + 1;

  double sum = 0.0;
  for (const int g : truth) {
    if (g < 0 || g >= n) {
      throw Error("truth verb index " + std::to_string(g) + " outside [0, " +
                  std::to_string(n) + ")");
    }
    sum += 1.0 - static_cast<double>(position[g]) / n;
  }
  return sum / static_cast<double>(truth.size());
}

}  // namespace afford
