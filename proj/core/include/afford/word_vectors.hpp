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
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace afford {

/// External word embeddings in the plain text interchange format: one
/// `token v1 v2 ... vD` line per word, space-separated. Every line must
/// carry the same width; duplicate tokens keep the first occurrence.
class WordVectors {
 public:
  static WordVectors load(const std::filesystem::path& path);

  std::optional<int> find(const std::string& normalized_token) const;
  Eigen::VectorXd vector(int index) const { return matrix_.row(index); }
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  int size() const { return static_cast<int>(tokens_.size()); }
  int width() const { return static_cast<int>(matrix_.cols()); }
  std::size_t duplicates_dropped() const { return duplicates_dropped_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
  Eigen::MatrixXd matrix_;
  std::size_t duplicates_dropped_ = 0;
};

}  // namespace afford
