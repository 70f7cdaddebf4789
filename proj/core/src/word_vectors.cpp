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

#include "afford/word_vectors.hpp"

#include <sstream>

#include "afford/error.hpp"
#include "afford/io.hpp"
#include "afford/vocab.hpp"

namespace afford {

WordVectors WordVectors::load(const std::filesystem::path& path) {
  WordVectors wv;
  std::vector<std::vector<double>> rows;
  int width = -1;

  const auto lines = io::read_lines(path);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    if (lines[ln].empty()) continue;
    std::istringstream iss(lines[ln]);
    std::string token;
    iss >> token;
    std::vector<double> values;
    double v;
    while (iss >> v) values.push_back(v);
    if (!iss.eof()) {
      throw Error(path.string() + ":" + std::to_string(ln + 1) +
                  ": malformed vector entry");
    }
    if (values.empty()) {
      throw Error(path.string() + ":" + std::to_string(ln + 1) +
                  ": token without values: " + token);
    }
    if (width == -1) {
      width = static_cast<int>(values.size());
    } else if (static_cast<int>(values.size()) != width) {
      throw Error(path.string() + ":" + std::to_string(ln + 1) + ": expected " +
                  std::to_string(width) + " values, got " +
                  std::to_string(values.size()));
    }
    const std::string key = VocabIndex::normalize(token);
    if (wv.index_.contains(key)) {
      ++wv.duplicates_dropped_;
      continue;
    }
    wv.index_.emplace(key, static_cast<int>(wv.tokens_.size()));
    wv.tokens_.push_back(key);
    rows.push_back(std::move(values));
  }

  if (rows.empty()) throw Error(path.string() + ": no word vectors found");
  wv.matrix_.resize(static_cast<int>(rows.size()), width);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < width; ++j) {
      wv.matrix_(static_cast<int>(i), j) = rows[i][static_cast<std::size_t>(j)];
    }
  }
  return wv;
}

std::optional<int> WordVectors::find(const std::string& normalized_token) const {
  const auto it = index_.find(normalized_token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

}  // namespace afford
