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
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "afford/vocab.hpp"

namespace afford {

/// Ground-truth affordance labels: object -> set of verbs. Loaded from TSV
/// `object<TAB>verb[<TAB>score]`; when a row carries a score it must clear
/// the cutoff to count as a label.
struct TruthTable {
  std::map<std::string, std::set<std::string>> labels;  // normalized terms
  std::size_t rows_read = 0;
  std::size_t rows_below_cutoff = 0;

  static TruthTable load(const std::filesystem::path& path,
                         double cutoff = 5.0);
};

/// Per-object rank-position scores for one ranker on one dataset.
struct AaucReport {
  std::string name;    // dataset name
  std::string method;  // ranker that produced the scores
  std::vector<std::string> objects;  // evaluated objects, vocabulary order
  std::vector<double> values;       // per-object score in [0, 1]
  std::vector<int> truth_counts;    // per-object label count after overlap
  int n_verbs = 0;                  // ranking length after overlap
  std::size_t objects_skipped = 0;  // in vocab but no surviving labels
  double mean = 0.0;

  void save(const std::filesystem::path& tsv_path,
            const std::filesystem::path& json_path,
            const std::filesystem::path& histogram_path,
            const std::string& config_hash = {}) const;
};

/// Produces verb scores over the full verb vocabulary for one object index.
using ObjectScorer = std::function<Eigen::VectorXd(int)>;

/// Scores a ranker against ground truth. Objects and verbs are first
/// restricted to the overlap between the truth table and the supplied
/// vocabularies; rankings are then formed over the restricted verb list
/// only. Throws afford::Error when either overlap is empty, naming both
/// vocabulary sizes.
AaucReport evaluate_dataset(const ObjectScorer& scorer, const VocabIndex& nouns,
                            const VocabIndex& verbs, const TruthTable& truth,
                            const std::string& name = {});

}  // namespace afford
