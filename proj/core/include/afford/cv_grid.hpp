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

namespace afford {

struct CvCell {
  int d = 0;
  double beta = 0.0;
  std::vector<double> errors;     // penalized hold-out error per restart
  std::vector<double> residuals;  // unpenalized masked residual, diagnostics
  int failed_restarts = 0;

  double mean_error() const;
};

struct CvReport {
  std::vector<CvCell> cells;
  int selected_d = 0;
  double selected_beta = 0.0;
  int K = 0;
  int q = 0;
  int restarts = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;

  void save(const std::filesystem::path& path,
            const std::string& config_hash = {}) const;
};

struct CvOptions {
  int K = 10;
  int q = 1;
  int restarts = 5;
  std::uint64_t seed = 0;
  int max_iter = 2000;
  double tol = 1e-6;
  int threads = 1;
};

/// Rejects impossible grid cells (rank out of range, negative sparsity
/// weight, hold-out parameters the matrix cannot support) up front.
void validate_grid(int m, int n, const std::vector<int>& d_list,
                   const std::vector<double>& beta_list, int K, int q);

/// Scores every (d, beta) cell by held-out reconstruction error. Each
/// restart draws a fresh block mask (shared across cells so scores are
/// paired); restart 0 starts from the SVD-based init, later restarts from
/// seeded uniform noise. A restart whose fit diverges is recorded as failed
/// and skipped; a cell with no surviving restart is excluded from selection
/// with a warning. Lowest mean error wins, ties preferring smaller d, then
/// smaller beta. Deterministic for fixed inputs and seed, regardless of
/// thread count.
CvReport cv_grid(const Eigen::MatrixXd& P, const std::vector<int>& d_list,
                 const std::vector<double>& beta_list, const CvOptions& opts);

/// Full-data fit at one (d, beta): same restart scheme, keeps the restart
/// with the lowest final training objective.
FactorPair fit_with_restarts(const Eigen::MatrixXd& P, int d, double beta,
                             const CvOptions& opts);

}  // namespace afford
