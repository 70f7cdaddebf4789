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

#include "afford/vocab.hpp"

#include <cctype>

#include "afford/error.hpp"
#include "afford/io.hpp"

namespace afford {

std::string VocabIndex::normalize(const std::string& term) {
  std::string out;
  out.reserve(term.size());
  for (const unsigned char c : term) {
    if (std::isspace(c)) {
      if (!out.empty() && out.back() != '_') out.push_back('_');
    } else {
      out.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  if (!out.empty() && out.front() == '_') out.erase(out.begin());
  return out;
}

VocabIndex VocabIndex::from_entries(const std::vector<std::string>& entries) {
  VocabIndex v;
  for (const auto& raw : entries) {
    const std::string term = normalize(raw);
    if (term.empty()) continue;
    if (v.index_.contains(term)) {
      ++v.duplicates_dropped_;
      continue;
    }
    v.index_.emplace(term, static_cast<int>(v.entries_.size()));
    v.entries_.push_back(term);
  }
  if (v.entries_.empty()) throw Error("empty vocabulary");
  return v;
}

VocabIndex VocabIndex::from_file(const std::filesystem::path& path) {
  return from_entries(io::read_lines(path));
}

std::optional<int> VocabIndex::find(const std::string& normalized_term) const {
  const auto it = index_.find(normalized_term);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

}  // namespace afford
