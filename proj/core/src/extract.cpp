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

#include "afford/extract.hpp"

#include <utility>

namespace afford {
namespace {

bool qualifying_relation(const std::string& deprel) {
  return deprel == "obj" || deprel == "nsubj:pass";
}

}  // namespace

void accumulate_pairs(const Sentence& sentence, const VocabIndex& nouns,
                      const VocabIndex& verbs, PairCounts& counts,
                      ExtractStats* stats, bool merge_bigrams) {
  for (const Token& t : sentence.tokens) {
    if (!qualifying_relation(t.deprel)) continue;
    const Token* head = sentence.by_id(t.head);
    if (head == nullptr) {
      if (stats) ++stats->missing_head;
      continue;
    }
    if (head->upos != "VERB") continue;
    if (stats) ++stats->candidates;

    const auto verb = verbs.find(VocabIndex::normalize(head->lemma));
    if (!verb) {
      if (stats) ++stats->unknown_verb;
      continue;
    }

    // Prefer a two-word vocabulary entry formed with the token directly to
    // the left ("ice cream" -> "ice_cream") over the bare lemma.
    std::optional<int> noun;
    bool is_bigram = false;
    if (const Token* prev = merge_bigrams ? sentence.by_id(t.id - 1) : nullptr) {
      noun = nouns.find(VocabIndex::normalize(prev->lemma) + "_" +
                        VocabIndex::normalize(t.lemma));
      is_bigram = noun.has_value();
    }
    if (!noun) noun = nouns.find(VocabIndex::normalize(t.lemma));
    if (!noun) {
      if (stats) ++stats->unknown_noun;
      continue;
    }

    counts[{*noun, *verb}] += 1.0;
    if (stats) {
      ++stats->counted;
      if (is_bigram) ++stats->bigrams;
    }
  }
}

LabeledMatrix extract_pairs(const std::vector<std::filesystem::path>& corpus,
                            VocabIndex nouns, VocabIndex verbs,
                            ExtractStats* stats, bool merge_bigrams) {
  PairCounts counts;
  for (const auto& path : corpus) {
    ConlluReader reader(path);
    Sentence s;
    while (reader.next(s)) {
      if (stats) ++stats->sentences;
      accumulate_pairs(s, nouns, verbs, counts, stats, merge_bigrams);
    }
  }

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(counts.size());
  for (const auto& [cell, value] : counts) {
    triplets.emplace_back(cell.first, cell.second, value);
  }
  LabeledMatrix out{std::move(nouns), std::move(verbs), SparseMat()};
  out.values.resize(out.rows.size(), out.cols.size());
  out.values.setFromTriplets(triplets.begin(), triplets.end());
  out.values.makeCompressed();
  return out;
}

}  // namespace afford
