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

#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace afford {

/// Ordered vocabulary with O(1) lookup. Entries are normalized on insert:
/// lowercased, internal whitespace replaced by '_'. First occurrence wins;
/// later duplicates are dropped and counted.
class VocabIndex {
 public:
  VocabIndex() = default;

  /// Builds from raw entries (one term each). Throws afford::Error when the
  /// normalized vocabulary ends up empty.
  static VocabIndex from_entries(const std::vector<std::string>& entries);

  /// One entry per non-empty line.
  static VocabIndex from_file(const std::filesystem::path& path);

  /// Normalization applied to both vocabulary entries and lookup keys.
  static std::string normalize(const std::string& term);

  std::optional<int> find(const std::string& normalized_term) const;
  const std::string& at(int index) const { return entries_.at(index); }
  const std::vector<std::string>& entries() const { return entries_; }
  int size() const { return static_cast<int>(entries_.size()); }
  int duplicates_dropped() const { return duplicates_dropped_; }

 private:
  std::vector<std::string> entries_;
  std::unordered_map<std::string, int> index_;
  int duplicates_dropped_ = 0;
};

}  // namespace afford
