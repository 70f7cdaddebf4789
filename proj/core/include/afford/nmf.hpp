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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "afford/mask.hpp"
#include "afford/vocab.hpp"

namespace afford {

/// Result of one factorization P ≈ O Vᵀ.
struct FactorPair {
  Eigen::MatrixXd O;   // m×d, non-negative
  Eigen::MatrixXd V;   // n×d, non-negative
  double beta = 0.0;
  int d = 0;
  std::uint64_t seed = 0;
  int iterations_run = 0;
  /// Penalized training objective, recorded at the initial point and after
  /// every full update sweep; non-increasing by construction.
  std::vector<double> objective_trace;
};

enum class InitKind { kNndsvd, kRandomUniform };

struct NmfOptions {
  int max_iter = 2000;
  /// Stop once the objective's relative decrease over a 10-sweep window
  /// falls below this.
  double tol = 1e-6;
  InitKind init = InitKind::kNndsvd;
  std::uint64_t seed = 0;  // drives the random init; recorded either way
  /// Precomputed starting point (overrides `init`); lets callers reuse one
  /// SVD-based initialization across a cross-validation grid.
  std::optional<std::pair<Eigen::MatrixXd, Eigen::MatrixXd>> start;
};

/// Multiplicative-update factorization with an L1 penalty beta on both
/// factors. Cells where the training mask is zero never contribute to the
/// updates. Factors stay non-negative; a NaN/Inf in either factor aborts
/// with a diagnostic. With beta = 0 denominators get +1e-12; with beta > 0
/// the penalty term already keeps them positive.
FactorPair masked_nmf(const Eigen::MatrixXd& P, const MaskSpec& mask, int d,
                      double beta, const NmfOptions& opts = {});

/// Penalized squared error on the held-out cells:
/// E = ||M_v ⊙ (P − O Vᵀ)||_F² + beta · (ΣO + ΣV).
double reconstruction_error(const Eigen::MatrixXd& P, const Eigen::MatrixXd& O,
                            const Eigen::MatrixXd& V,
                            const Eigen::MatrixXd& m_v, double beta);

/// Squared error alone, for diagnostics alongside the penalized score.
double masked_residual(const Eigen::MatrixXd& P, const Eigen::MatrixXd& O,
                       const Eigen::MatrixXd& V, const Eigen::MatrixXd& m_v);

/// Writes O.tsv / V.tsv (dimension-id header, one labeled row per term)
/// plus a factors.json sidecar into `dir`.
void save_factors(const std::filesystem::path& dir, const FactorPair& fp,
                  const VocabIndex& rows, const VocabIndex& cols,
                  const std::string& config_hash = {});

/// Reads the triple written by save_factors, validating vocabulary order.
FactorPair load_factors(const std::filesystem::path& dir,
                        const VocabIndex& rows, const VocabIndex& cols);

}  // namespace afford
