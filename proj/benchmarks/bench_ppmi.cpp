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

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "afford/ppmi.hpp"
#include "afford/rng.hpp"

namespace {

afford::LabeledMatrix random_counts(int m, int n, double density,
                                    std::uint64_t seed) {
  std::vector<std::string> nouns(m), verbs(n);
  for (int i = 0; i < m; ++i) nouns[i] = "n" + std::to_string(i);
  for (int k = 0; k < n; ++k) verbs[k] = "v" + std::to_string(k);

  afford::rng::Engine eng(seed);
  std::vector<Eigen::Triplet<double>> triplets;
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < n; ++k) {
      if (afford::rng::uniform01(eng) < density) {
        triplets.emplace_back(
            i, k, 1.0 + static_cast<double>(afford::rng::bounded(eng, 20)));
      }
    }
  }
  afford::LabeledMatrix counts{afford::VocabIndex::from_entries(nouns),
                               afford::VocabIndex::from_entries(verbs),
                               afford::SparseMat(m, n)};
  counts.values.setFromTriplets(triplets.begin(), triplets.end());
  return counts;
}

void BM_Ppmi(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto counts = random_counts(m, 2 * m, 0.05, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(afford::ppmi(counts));
  }
  state.SetItemsProcessed(state.iterations() * counts.values.nonZeros());
}

}  // namespace

BENCHMARK(BM_Ppmi)->Arg(200)->Arg(800)->Arg(2000);

BENCHMARK_MAIN();
