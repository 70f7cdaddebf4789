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
#include <vector>

#include "afford/nmf.hpp"
#include "afford/sparse_matrix.hpp"

namespace afford {

/// Cosine similarity between every embedding dimension and every
/// reconstructed verb column. Dimensions whose O column is entirely zero
/// have no direction and are dropped (their indices are recorded); verb
/// columns whose reconstruction is zero score 0 against everything.
struct SimilarityMatrix {
  Eigen::MatrixXd S;              // kept dims × n, entries in [0, 1]
  std::vector<int> kept_dims;     // original column indices of O
  std::vector<int> dropped_dims;  // all-zero columns of O
};

SimilarityMatrix similarity_matrix(const FactorPair& fp);

/// Verb scores for one object with the shared ordering rule: descending
/// score, ties broken by ascending verb index.
struct VerbRanking {
  int object_id = -1;
  Eigen::VectorXd scores;
  std::vector<int> order;  // permutation of [0, n)
};

/// Applies the ordering rule to precomputed scores.
VerbRanking rank_scores(int object_id, Eigen::VectorXd scores);

/// scores = O_{i,:} S restricted to the kept dimensions.
VerbRanking object_verb_ranking(const FactorPair& fp,
                                const SimilarityMatrix& sim, int i);

/// Baseline: rank verbs by the object's raw association row.
VerbRanking ppmi_row_ranking(const LabeledMatrix& P, int i);

/// Baseline: rank verbs by cosine between external word vectors.
/// verb_vectors holds one row per verb. Zero-norm verb rows score -inf and
/// sort last; a zero-norm noun vector is an error.
VerbRanking baseline_cosine_ranking(const Eigen::VectorXd& noun_vector,
                                    const Eigen::MatrixXd& verb_vectors,
                                    int object_id = -1);

/// Rank-position score in [0, 1]: with l_k the 1-based position of truth
/// verb k in the order and n the ranking length, (1/K) Σ (1 - l_k / n).
double aauc(const VerbRanking& ranking, const std::vector<int>& truth);

}  // namespace afford
