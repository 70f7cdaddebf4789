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
#include <filesystem>
#include <string>
#include <vector>

#include "afford/nmf.hpp"
#include "afford/ranking.hpp"
#include "afford/sparse_matrix.hpp"
#include "afford/vocab.hpp"

namespace afford {

/// External per-object representation aligned to the noun vocabulary.
/// Rows whose noun is unknown or has no verb co-occurrences are dropped;
/// rows sharing a noun label are averaged.
struct TargetMatrix {
  Eigen::MatrixXd Y;                    // kept objects × D, vocab order
  std::vector<int> noun_indices;        // vocab index per kept row, ascending
  std::vector<std::string> dim_labels;
  std::size_t rows_dropped_unknown = 0;
  std::size_t rows_dropped_zero = 0;    // noun row of P is entirely zero
  std::size_t rows_averaged = 0;        // duplicates merged into their noun

  /// TSV with header `object<TAB>dim_1<TAB>...`.
  static TargetMatrix load(const std::filesystem::path& path,
                           const VocabIndex& nouns, const LabeledMatrix& P);
  static TargetMatrix align(
      const std::vector<std::pair<std::string, Eigen::VectorXd>>& raw_rows,
      std::vector<std::string> dim_labels, const VocabIndex& nouns,
      const LabeledMatrix& P);
};

struct LassoResult {
  Eigen::VectorXd w;       // non-negative
  bool converged = true;
  double final_gap = 0.0;  // max coordinate change in the last sweep
  int sweeps = 0;
};

/// min_w (1/2m)||y - Ow||² + lambda·||w||₁ subject to w ≥ 0, by cyclic
/// coordinate descent (each coordinate has a closed-form clamp). Stops when
/// the largest coordinate change in a sweep is below 1e-8 or after 10⁴
/// sweeps; hitting the cap returns with converged = false.
LassoResult nonneg_lasso(const Eigen::MatrixXd& O, const Eigen::VectorXd& y,
                         double lambda);

/// Default penalty grid: `points` log-spaced values spanning [1e-7, 1e3].
std::vector<double> lambda_grid(int points = 50);

struct CvLambdaResult {
  double lambda_star = 0.0;
  std::vector<double> grid;      // ascending
  std::vector<double> cv_curve;  // summed out-of-fold squared error / m
  Eigen::VectorXd yhat;          // out-of-fold predictions at lambda_star
  std::vector<int> fold;         // fold id per row
  bool all_converged = true;
};

/// Penalty selection by 2-fold cross-validation: seeded shuffle into
/// balanced folds, fit on each fold, score squared error on the other,
/// sum both directions. Fits walk the grid from the largest penalty down
/// with warm starts. Ties prefer the larger penalty.
CvLambdaResult cv_lambda(const Eigen::MatrixXd& O, const Eigen::VectorXd& y,
                         const std::vector<double>& grid, int folds = 2,
                         std::uint64_t seed = 0);

struct DimFit {
  std::string label;
  Eigen::VectorXd w;             // full-data refit at lambda_star
  double lambda_star = 0.0;
  std::vector<double> cv_curve;
  Eigen::VectorXd yhat;          // out-of-fold predictions
  double r = 0.0;                // Pearson between target and yhat (primary)
  double p = 1.0;
  double r_refit = 0.0;          // in-sample correlation of the refit
  double p_refit = 1.0;
  bool ok = true;
  bool converged = true;
  std::string error;             // set when ok is false
};

struct RegressionFit {
  std::vector<DimFit> dims;
  std::vector<int> noun_indices;  // rows of O the fits were run on
};

/// One cv_lambda + full-data refit per target dimension. O must already be
/// restricted to the target's rows. A dimension whose statistics cannot be
/// computed (constant target, say) is returned flagged rather than
/// aborting the batch.
RegressionFit fit_all_dims(const Eigen::MatrixXd& O, const TargetMatrix& Y,
                           const std::vector<double>& grid,
                           std::uint64_t seed, int threads = 1);

struct BestMatch {
  int dim = -1;      // index of the best-correlated O column
  double r = 0.0;
  bool flagged = false;  // some pairing had zero variance (scored 0)
};

/// Per Y column: highest Pearson correlation against any single O column.
std::vector<BestMatch> best_match_correlation(const Eigen::MatrixXd& Y,
                                              const Eigen::MatrixXd& O);

struct VerbAssignment {
  std::vector<VerbRanking> rankings;  // one per target dimension
  std::vector<bool> empty_flags;      // all-zero prediction column
};

/// Ranks verbs for each predicted target dimension by cosine against the
/// reconstructed verb columns, with the prediction matrix standing in for
/// the object embedding. Rows of yhat must align with fp.O's rows; tiny
/// negative predictions are clamped to zero first.
VerbAssignment spose_verb_assignment(const Eigen::MatrixXd& yhat,
                                     const FactorPair& fp);

/// Share of the prediction each embedding dimension carries:
/// c_i = w_i·||O_{:,i}||₂, normalized to percentages summing to 100
/// (all zeros when w is entirely zero).
Eigen::VectorXd contribution_analysis(const Eigen::VectorXd& w,
                                      const Eigen::MatrixXd& O);

/// regression.json (per-dimension weights, penalty, correlations,
/// contributions, top verbs) plus a summary TSV with one row per dimension:
/// r, p, label, taxonomy placeholder, top verbs.
void save_regression(const std::filesystem::path& json_path,
                     const std::filesystem::path& summary_path,
                     const RegressionFit& fit, const TargetMatrix& targets,
                     const Eigen::MatrixXd& O, const VerbAssignment& verbs,
                     const VocabIndex& verb_vocab, int top_verbs = 5,
                     const std::string& config_hash = {});

}  // namespace afford
