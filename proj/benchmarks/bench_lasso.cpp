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

#include "afford/regression.hpp"
#include "afford/rng.hpp"

namespace {

void BM_CvLambda(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const int d = static_cast<int>(state.range(1));
  afford::rng::Engine eng(23);
  Eigen::MatrixXd O(m, d);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < d; ++j) O(i, j) = afford::rng::uniform01(eng);
  }
  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  for (int j = 0; j < d; j += 4) w[j] = afford::rng::uniform01(eng);
  const Eigen::VectorXd y = O * w;

  const auto grid = afford::lambda_grid(50);
  for (auto _ : state) {
    benchmark::DoNotOptimize(afford::cv_lambda(O, y, grid, 2, 5));
  }
}

}  // namespace

BENCHMARK(BM_CvLambda)->Args({200, 20})->Args({1000, 70});

BENCHMARK_MAIN();
