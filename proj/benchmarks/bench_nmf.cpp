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

#include "afford/nmf.hpp"
#include "afford/rng.hpp"

namespace {

Eigen::MatrixXd random_nonneg(int m, int n, std::uint64_t seed) {
  afford::rng::Engine eng(seed);
  Eigen::MatrixXd M(m, n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) M(i, j) = afford::rng::uniform01(eng);
  }
  return M;
}

// Fixed iteration count so the benchmark measures update cost, not how far
// from convergence the random instance happens to start.
void BM_MaskedNmf(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const int d = static_cast<int>(state.range(1));
  const Eigen::MatrixXd P = random_nonneg(m, 2 * m, 11);
  afford::NmfOptions opts;
  opts.max_iter = 50;
  opts.tol = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        afford::masked_nmf(P, afford::MaskSpec::all_ones(), d, 0.3, opts));
  }
}

}  // namespace

BENCHMARK(BM_MaskedNmf)
    ->Args({100, 10})
    ->Args({100, 40})
    ->Args({400, 10})
    ->Args({400, 70});

BENCHMARK_MAIN();
