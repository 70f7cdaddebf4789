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
#include <istream>
#include <memory>
#include <string>
#include <vector>

namespace afford {

/// One syntactic word from a CoNLL-U sentence. Multiword-token ranges and
/// empty nodes are skipped at read time, so `id` is always a plain integer.
struct Token {
  int id = 0;        // 1-based position within the sentence
  std::string form;
  std::string lemma;
  std::string upos;
  int head = 0;      // 0 = root
  std::string deprel;
};

struct Sentence {
  std::vector<Token> tokens;

  /// Token with the given 1-based id, or nullptr. Ids normally equal the
  /// position, but a linear scan keeps malformed numbering survivable.
  const Token* by_id(int id) const;
};

/// Streaming reader over one CoNLL-U file (plain or .gz). Comment lines and
/// sub-token rows are dropped; structural problems are reported with the
/// 1-based line number where they occur.
class ConlluReader {
 public:
  explicit ConlluReader(const std::filesystem::path& path);

  /// Fills `out` with the next sentence; false at end of input.
  bool next(Sentence& out);

  std::size_t sentences_read() const { return sentences_read_; }

 private:
  std::unique_ptr<std::istream> in_;
  std::string path_;
  std::size_t line_no_ = 0;
  std::size_t sentences_read_ = 0;
};

std::vector<Sentence> read_conllu(const std::filesystem::path& path);

}  // namespace afford
