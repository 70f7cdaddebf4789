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

#include "afford/eval.hpp"

#include <algorithm>
#include <cstdlib>

#include <nlohmann/json.hpp>

#include "afford/error.hpp"
#include "afford/io.hpp"
#include "afford/ranking.hpp"

namespace afford {

TruthTable TruthTable::load(const std::filesystem::path& path, double cutoff) {
  TruthTable table;
  const auto lines = io::read_lines(path);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string& line = lines[ln];
    if (line.empty() || line.front() == '#') continue;
    const auto fields = io::split_tabs(line);
    if (fields.size() != 2 && fields.size() != 3) {
      throw Error(path.string() + ":" + std::to_string(ln + 1) +
                  ": expected 'object<TAB>verb[<TAB>score]'");
    }
    ++table.rows_read;
    if (fields.size() == 3) {
      char* end = nullptr;
      const double score = std::strtod(fields[2].c_str(), &end);
      if (end != fields[2].c_str() + fields[2].size()) {
        throw Error(path.string() + ":" + std::to_string(ln + 1) +
                    ": score is not a number: " + fields[2]);
      }
      if (score < cutoff) {
        ++table.rows_below_cutoff;
        continue;
      }
    }
    table.labels[VocabIndex::normalize(fields[0])].insert(
        VocabIndex::normalize(fields[1]));
  }
  if (table.labels.empty()) {
    throw Error(path.string() + ": no labels survive the cutoff");
  }
  return table;
}

AaucReport evaluate_dataset(const ObjectScorer& scorer, const VocabIndex& nouns,
                            const VocabIndex& verbs, const TruthTable& truth,
                            const std::string& name) {
  // Dataset verbs present in the verb vocabulary form the ranking universe,
  // listed in vocabulary order so rankings are deterministic.
  std::set<std::string> dataset_verbs;
  for (const auto& [object, verb_set] : truth.labels) {
    dataset_verbs.insert(verb_set.begin(), verb_set.end());
  }
  std::vector<int> verb_subset;  // indices into the verb vocabulary
  for (int k = 0; k < verbs.size(); ++k) {
    if (dataset_verbs.contains(verbs.at(k))) verb_subset.push_back(k);
  }

  std::vector<std::pair<int, const std::set<std::string>*>> objects;
  for (int i = 0; i < nouns.size(); ++i) {
    const auto it = truth.labels.find(nouns.at(i));
    if (it != truth.labels.end()) objects.push_back({i, &it->second});
  }

  if (objects.empty() || verb_subset.empty()) {
    throw Error("dataset/vocabulary intersection is empty (" +
                std::to_string(nouns.size()) + " nouns, " +
                std::to_string(verbs.size()) + " verbs in the artifact; " +
                std::to_string(truth.labels.size()) + " objects, " +
                std::to_string(dataset_verbs.size()) + " verbs in the dataset)");
  }

  std::map<std::string, int> subset_pos;  // verb term -> restricted index
  for (std::size_t r = 0; r < verb_subset.size(); ++r) {
    subset_pos[verbs.at(verb_subset[r])] = static_cast<int>(r);
  }

  AaucReport report;
  report.name = name;
  report.n_verbs = static_cast<int>(verb_subset.size());
  for (const auto& [noun_index, verb_set] : objects) {
    std::vector<int> truth_indices;
    for (const auto& verb : *verb_set) {
      const auto it = subset_pos.find(verb);
      if (it != subset_pos.end()) truth_indices.push_back(it->second);
    }
    if (truth_indices.empty()) {
      ++report.objects_skipped;
      continue;
    }

    const Eigen::VectorXd full = scorer(noun_index);
    if (full.size() != verbs.size()) {
      throw Error("scorer returned " + std::to_string(full.size()) +
                  " scores for a vocabulary of " +
                  std::to_string(verbs.size()));
    }
    Eigen::VectorXd restricted(verb_subset.size());
    for (std::size_t r = 0; r < verb_subset.size(); ++r) {
      restricted[static_cast<int>(r)] = full[verb_subset[r]];
    }

    const VerbRanking ranking = rank_scores(noun_index, std::move(restricted));
    report.objects.push_back(nouns.at(noun_index));
    report.values.push_back(aauc(ranking, truth_indices));
    report.truth_counts.push_back(static_cast<int>(truth_indices.size()));
  }

  if (report.values.empty()) {
    throw Error("no object kept any label after vocabulary overlap (" +
                std::to_string(nouns.size()) + " nouns, " +
                std::to_string(verbs.size()) + " verbs in the artifact)");
  }
  double sum = 0.0;
  for (const double v : report.values) sum += v;
  report.mean = sum / static_cast<double>(report.values.size());
  return report;
}

void AaucReport::save(const std::filesystem::path& tsv_path,
                      const std::filesystem::path& json_path,
                      const std::filesystem::path& histogram_path,
                      const std::string& config_hash) const {
  io::atomic_write(tsv_path, [&](std::ostream& out) {
    out << "object\taauc\ttruth_count\n";
    for (std::size_t i = 0; i < objects.size(); ++i) {
      out << objects[i] << '\t' << io::format_double(values[i]) << '\t'
          << truth_counts[i] << '\n';
    }
  });

  nlohmann::json j;
  j["type"] = "aauc";
  j["name"] = name;
  if (!method.empty()) j["method"] = method;
  j["mean_aauc"] = mean;
  j["objects_evaluated"] = objects.size();
  j["objects_skipped"] = objects_skipped;
  j["ranking_length"] = n_verbs;
  if (!config_hash.empty()) j["config"] = config_hash;
  io::atomic_write(json_path,
                   [&](std::ostream& out) { out << j.dump(2) << '\n'; });

  // 20 equal bins over [0, 1]; a score of exactly 1 lands in the last bin.
  constexpr int kBins = 20;
  std::vector<int> counts(kBins, 0);
  for (const double v : values) {
    const int bin = std::min(static_cast<int>(v * kBins), kBins - 1);
    ++counts[std::max(bin, 0)];
  }
  io::atomic_write(histogram_path, [&](std::ostream& out) {
    out << "bin_lo\tbin_hi\tcount\n";
    for (int b = 0; b < kBins; ++b) {
      out << io::format_double(static_cast<double>(b) / kBins) << '\t'
          << io::format_double(static_cast<double>(b + 1) / kBins) << '\t'
          << counts[b] << '\n';
    }
  });
}

}  // namespace afford
