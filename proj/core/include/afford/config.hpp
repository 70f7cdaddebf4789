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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace afford {

struct NmfConfig {
  std::optional<int> d;          // final-fit rank; falls back to cv selection
  std::optional<double> beta;
  std::vector<int> d_list;       // cross-validation grid
  std::vector<double> beta_list;
  int K = 10;
  int q = 1;
  int restarts = 5;
  int max_iter = 2000;
  double tol = 1e-6;
};

struct RegressionConfig {
  int grid_points = 50;
  int folds = 2;
  std::optional<std::uint64_t> seed;  // defaults to the master seed
  std::filesystem::path targets;
  int top_verbs = 5;
};

struct EvalDataset {
  std::string name;
  std::filesystem::path truth;
  double cutoff = 5.0;
};

/// One run's full configuration. Every input path named in the file must
/// exist when the config is loaded, and the seed must be explicit; there is
/// no fallback to system entropy anywhere.
struct RunConfig {
  std::uint64_t seed = 0;
  std::filesystem::path output_dir;
  std::vector<std::filesystem::path> corpus;  // glob-expanded, sorted
  std::filesystem::path nouns;
  std::filesystem::path verbs;
  NmfConfig nmf;
  RegressionConfig regression;
  std::vector<EvalDataset> datasets;
  std::filesystem::path vectors;  // optional external word vectors
  std::string format_version;
  std::string config_hash;  // over the config content, location-independent

  /// Parses and validates. Relative paths resolve against the config
  /// file's directory. `output_dir_override` (CLI flag or environment)
  /// wins over the configured directory and never affects the hash.
  static RunConfig load(const std::filesystem::path& path,
                        const std::optional<std::string>& output_dir_override);

  std::filesystem::path out(const std::string& artifact) const {
    return output_dir / artifact;
  }
};

/// `*` wildcards in the filename component only; a pattern that matches
/// nothing is an error. Plain paths pass through. Results are sorted.
std::vector<std::filesystem::path> expand_glob(
    const std::filesystem::path& pattern);

}  // namespace afford
