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
#include <map>
#include <utility>
#include <vector>

#include "afford/conllu.hpp"
#include "afford/sparse_matrix.hpp"
#include "afford/vocab.hpp"

namespace afford {

struct ExtractStats {
  std::size_t sentences = 0;
  std::size_t candidates = 0;       // tokens with a qualifying relation under a verb
  std::size_t counted = 0;
  std::size_t bigrams = 0;          // counted pairs that matched a two-word noun
  std::size_t unknown_noun = 0;
  std::size_t unknown_verb = 0;
  std::size_t missing_head = 0;     // head id absent from the sentence (incl. root)
};

/// Collects noun-verb co-occurrence counts from parsed sentences.
///
/// A token contributes when its relation is "obj" or "nsubj:pass" and its
/// head is tagged VERB (auxiliaries never qualify). Lemmas are matched
/// lowercased. With merge_bigrams on, a token whose immediate left
/// neighbour joins with it into a two-word entry of the noun vocabulary
/// ("ice_cream") counts as that entry instead of the single lemma.
LabeledMatrix extract_pairs(const std::vector<std::filesystem::path>& corpus,
                            VocabIndex nouns, VocabIndex verbs,
                            ExtractStats* stats = nullptr,
                            bool merge_bigrams = true);

/// (row, col) -> count, ordered so artifact output is deterministic.
using PairCounts = std::map<std::pair<int, int>, double>;

/// Same, over one already-parsed sentence (used by tests).
void accumulate_pairs(const Sentence& sentence, const VocabIndex& nouns,
                      const VocabIndex& verbs, PairCounts& counts,
                      ExtractStats* stats, bool merge_bigrams = true);

}  // namespace afford
