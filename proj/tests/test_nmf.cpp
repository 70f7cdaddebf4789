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

#include <doctest.h>

#include <cmath>
#include <limits>

#include "afford/cv_grid.hpp"
#include "afford/error.hpp"
#include "afford/nmf.hpp"
#include "afford/nndsvd.hpp"
#include "testutil.hpp"

using namespace afford;
using testutil::contains;
using testutil::error_message;

namespace {

bool non_increasing(const std::vector<double>& trace, double slack) {
  for (std::size_t i = 1; i < trace.size(); ++i) {
    if (trace[i] > trace[i - 1] + slack) return false;
  }
  return true;
}

Eigen::MatrixXd planted(afford::rng::Engine& eng, int m, int n, int d_true,
                        double noise_sd = 0.0) {
  const Eigen::MatrixXd O = testutil::random_nonneg(eng, m, d_true, 0.2, 1.5);
  const Eigen::MatrixXd V = testutil::random_nonneg(eng, n, d_true, 0.2, 1.5);
  Eigen::MatrixXd P = O * V.transpose();
  if (noise_sd > 0.0) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j)
        P(i, j) += std::abs(noise_sd * rng::normal(eng));
  }
  return P;
}

}  // namespace

TEST_CASE("svd init reconstructs a rank-1 matrix") {
  auto eng = rng::Engine(rng::mix(3, 0));
  const Eigen::MatrixXd u = testutil::random_nonneg(eng, 8, 1, 0.1, 2.0);
  const Eigen::MatrixXd v = testutil::random_nonneg(eng, 6, 1, 0.1, 2.0);
  const Eigen::MatrixXd P = u * v.transpose();

  const auto [O, V] = nndsvd_init(P, 1);
  CHECK((P - O * V.transpose()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("svd init reconstructs the 2x2 identity at full rank") {
  const auto [O, V] = nndsvd_init(Eigen::MatrixXd::Identity(2, 2), 2);
  const Eigen::MatrixXd R = O * V.transpose();
  CHECK((R - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("svd init is entrywise non-negative") {
  auto eng = rng::Engine(rng::mix(4, 0));
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::MatrixXd P = testutil::random_nonneg(eng, 10, 7, 0.0, 1.0);
    const auto [O, V] = nndsvd_init(P, 3);
    CHECK(O.minCoeff() >= 0.0);
    CHECK(V.minCoeff() >= 0.0);
    CHECK(O.cols() == 3);
    CHECK(V.cols() == 3);
  }
}

TEST_CASE("svd init validates rank and signal") {
  const Eigen::MatrixXd P = Eigen::MatrixXd::Ones(4, 5);
  CHECK_THROWS_AS(nndsvd_init(P, 0), ConfigError);
  CHECK_THROWS_AS(nndsvd_init(P, 5), ConfigError);
  CHECK(contains(
      error_message([] { nndsvd_init(Eigen::MatrixXd::Zero(3, 3), 1); }),
      "no positive"));
}

TEST_CASE("block masks hold out one block of a 4x4 2-partition") {
  const auto mask = make_block_masks(4, 4, 2, 1, 99);
  CHECK(mask.validation_count() == 4);
  const Eigen::MatrixXd mv = mask.validation_matrix();
  const Eigen::MatrixXd mt = mask.training_matrix();
  CHECK(mv.sum() == 4.0);
  CHECK(mt.sum() == 12.0);
  // Complementarity: training plus validation covers each cell once.
  CHECK((mv + mt - Eigen::MatrixXd::Ones(4, 4)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("block masks hold out 625 cells of a 100x100 4-partition") {
  const auto mask = make_block_masks(100, 100, 4, 1, 7);
  CHECK(mask.validation_count() == 625);
}

TEST_CASE("block masks are deterministic in the seed") {
  const auto a = make_block_masks(30, 20, 5, 2, 1234);
  const auto b = make_block_masks(30, 20, 5, 2, 1234);
  CHECK(a.row_group == b.row_group);
  CHECK(a.col_group == b.col_group);
  CHECK(a.held_out == b.held_out);

  const auto c = make_block_masks(30, 20, 5, 2, 1235);
  CHECK((a.row_group != c.row_group || a.col_group != c.col_group ||
         a.held_out != c.held_out));
}

TEST_CASE("block mask construction validates its parameters") {
  CHECK_THROWS_AS(make_block_masks(10, 10, 1, 1, 0), ConfigError);
  CHECK_THROWS_AS(make_block_masks(10, 10, 4, 4, 0), ConfigError);
  CHECK_THROWS_AS(make_block_masks(10, 10, 4, 0, 0), ConfigError);
  CHECK_THROWS_AS(make_block_masks(3, 10, 4, 1, 0), ConfigError);
  CHECK_THROWS_AS(make_block_masks(10, 3, 4, 1, 0), ConfigError);
}

TEST_CASE("mask groups stay balanced") {
  const auto mask = make_block_masks(23, 17, 5, 1, 11);
  std::vector<int> row_sizes(5, 0), col_sizes(5, 0);
  for (int g : mask.row_group) ++row_sizes[g];
  for (int g : mask.col_group) ++col_sizes[g];
  for (int g = 0; g < 5; ++g) {
    CHECK(row_sizes[g] >= 23 / 5);
    CHECK(row_sizes[g] <= 23 / 5 + 1);
    CHECK(col_sizes[g] >= 17 / 5);
    CHECK(col_sizes[g] <= 17 / 5 + 1);
  }
}

TEST_CASE("factorization recovers a rank-1 matrix essentially exactly") {
  auto eng = rng::Engine(rng::mix(21, 0));
  const Eigen::MatrixXd P = planted(eng, 12, 9, 1);

  NmfOptions opts;
  opts.max_iter = 200;
  opts.tol = 0.0;  // run the full budget
  const auto fp = masked_nmf(P, MaskSpec::all_ones(), 1, 0.0, opts);

  const double rel =
      (P - fp.O * fp.V.transpose()).squaredNorm() / P.squaredNorm();
  CHECK(rel < 1e-6);
  CHECK(fp.iterations_run <= 200);
}

TEST_CASE("objective trace never increases") {
  auto eng = rng::Engine(rng::mix(22, 0));
  const Eigen::MatrixXd P = planted(eng, 20, 30, 4, 0.05);

  for (const double beta : {0.0, 0.3, 1.0}) {
    for (const bool blocked : {false, true}) {
      const MaskSpec mask = blocked
          ? MaskSpec::block(make_block_masks(20, 30, 4, 1, 5))
          : MaskSpec::all_ones();
      NmfOptions opts;
      opts.max_iter = 120;
      opts.tol = 0.0;
      const auto fp = masked_nmf(P, mask, 4, beta, opts);
      CHECK(non_increasing(fp.objective_trace, 1e-9));
      CHECK(fp.O.minCoeff() >= 0.0);
      CHECK(fp.V.minCoeff() >= 0.0);
      CHECK(fp.objective_trace.size() ==
            static_cast<std::size_t>(fp.iterations_run) + 1);
    }
  }
}

TEST_CASE("held-out cells never feed the fit") {
  // P is zero exactly on the held-out block; the fit must stay finite and
  // monotone because those cells are invisible to the updates.
  const auto mask = make_block_masks(12, 12, 3, 1, 77);
  auto eng = rng::Engine(rng::mix(23, 0));
  Eigen::MatrixXd P = planted(eng, 12, 12, 2);
  const Eigen::MatrixXd mv = mask.validation_matrix();
  P = (P.array() * (1.0 - mv.array())).matrix();

  NmfOptions opts;
  opts.max_iter = 150;
  const auto fp = masked_nmf(P, MaskSpec::block(mask), 2, 0.1, opts);
  CHECK(fp.O.allFinite());
  CHECK(fp.V.allFinite());
  CHECK((fp.O * fp.V.transpose()).allFinite());
  CHECK(non_increasing(fp.objective_trace, 1e-9));
}

TEST_CASE("factorization is bit-for-bit deterministic") {
  auto eng = rng::Engine(rng::mix(24, 0));
  const Eigen::MatrixXd P = planted(eng, 15, 10, 3, 0.1);

  NmfOptions opts;
  opts.max_iter = 80;
  opts.init = InitKind::kRandomUniform;
  opts.seed = 991;
  const auto a = masked_nmf(P, MaskSpec::all_ones(), 3, 0.2, opts);
  const auto b = masked_nmf(P, MaskSpec::all_ones(), 3, 0.2, opts);
  CHECK(a.O == b.O);
  CHECK(a.V == b.V);
  CHECK(a.objective_trace == b.objective_trace);

  opts.seed = 992;
  const auto c = masked_nmf(P, MaskSpec::all_ones(), 3, 0.2, opts);
  CHECK(a.O != c.O);
}

TEST_CASE("factorization validates inputs and flags divergence") {
  const Eigen::MatrixXd P = Eigen::MatrixXd::Ones(5, 4);
  CHECK_THROWS_AS(masked_nmf(P, MaskSpec::all_ones(), 0, 0.0), ConfigError);
  CHECK_THROWS_AS(masked_nmf(P, MaskSpec::all_ones(), 5, 0.0), ConfigError);
  CHECK_THROWS_AS(masked_nmf(P, MaskSpec::all_ones(), 2, -0.1), ConfigError);

  Eigen::MatrixXd neg = P;
  neg(1, 1) = -1.0;
  CHECK(contains(
      error_message([&] { masked_nmf(neg, MaskSpec::all_ones(), 2, 0.0); }),
      "negative"));

  // A poisoned starting point must be caught by the divergence guard, with
  // the iteration and cell parameters in the message.
  NmfOptions opts;
  opts.start = std::make_pair(Eigen::MatrixXd::Constant(
                                  5, 2, std::numeric_limits<double>::quiet_NaN()),
                              Eigen::MatrixXd::Ones(4, 2));
  const auto msg = error_message(
      [&] { masked_nmf(P, MaskSpec::all_ones(), 2, 0.3, opts); });
  CHECK(contains(msg, "non-finite"));
  CHECK(contains(msg, "iteration 1"));
  CHECK(contains(msg, "beta=0.3"));
}

TEST_CASE("hold-out error matches hand arithmetic") {
  // Exact factors leave nothing unexplained.
  auto eng = rng::Engine(rng::mix(25, 0));
  const Eigen::MatrixXd O = testutil::random_nonneg(eng, 6, 2);
  const Eigen::MatrixXd V = testutil::random_nonneg(eng, 5, 2);
  const Eigen::MatrixXd P = O * V.transpose();
  CHECK(reconstruction_error(P, O, V, Eigen::MatrixXd::Ones(6, 5), 0.0) ==
        doctest::Approx(0.0).epsilon(1e-12));

  // Empty hold-out scores zero regardless of fit quality.
  CHECK(reconstruction_error(P, O, 2.0 * V, Eigen::MatrixXd::Zero(6, 5), 0.0) ==
        0.0);

  // Anti-diagonal hold-out of a 2x2 identity against the all-ones product.
  Eigen::MatrixXd P2 = Eigen::MatrixXd::Identity(2, 2);
  Eigen::MatrixXd O2 = Eigen::MatrixXd::Ones(2, 1);
  Eigen::MatrixXd V2 = Eigen::MatrixXd::Ones(2, 1);
  Eigen::MatrixXd mv(2, 2);
  mv << 0, 1, 1, 0;
  CHECK(reconstruction_error(P2, O2, V2, mv, 0.0) == doctest::Approx(2.0));

  // The penalty contributes beta times the total factor mass.
  CHECK(reconstruction_error(P2, O2, V2, mv, 0.5) ==
        doctest::Approx(2.0 + 0.5 * 4.0));

  CHECK_THROWS_AS(
      reconstruction_error(P2, Eigen::MatrixXd::Ones(3, 1), V2, mv, 0.0),
      Error);
  CHECK_THROWS_AS(
      reconstruction_error(P2, O2, V2, Eigen::MatrixXd::Ones(3, 3), 0.0),
      Error);
}

TEST_CASE("factor files round-trip through disk") {
  auto eng = rng::Engine(rng::mix(26, 0));
  const Eigen::MatrixXd P = planted(eng, 4, 4, 2);
  NmfOptions opts;
  opts.max_iter = 50;
  opts.seed = 17;
  const auto fp = masked_nmf(P, MaskSpec::all_ones(), 2, 0.1, opts);

  const auto rows = VocabIndex::from_entries(testutil::numbered("noun", 4));
  const auto cols = VocabIndex::from_entries(testutil::numbered("verb", 4));
  testutil::TempDir dir("factors");
  save_factors(dir.path(), fp, rows, cols, "00ff00ff00ff00ff");

  const auto back = load_factors(dir.path(), rows, cols);
  CHECK(back.d == 2);
  CHECK(back.beta == doctest::Approx(0.1));
  CHECK(back.seed == 17);
  CHECK(back.iterations_run == fp.iterations_run);
  CHECK((back.O - fp.O).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((back.V - fp.V).cwiseAbs().maxCoeff() < 1e-10);

  const auto wrong = VocabIndex::from_entries(testutil::numbered("other", 4));
  CHECK(contains(
      error_message([&] { load_factors(dir.path(), wrong, cols); }),
      "does not match vocabulary"));
}

TEST_CASE("grid validation accepts the full-scale operating point") {
  CHECK_NOTHROW(validate_grid(1854, 2541, {70}, {0.3}, 10, 1));
  CHECK_THROWS_AS(validate_grid(10, 10, {11}, {0.1}, 2, 1), ConfigError);
  CHECK_THROWS_AS(validate_grid(10, 10, {2}, {-0.1}, 2, 1), ConfigError);
  CHECK_THROWS_AS(validate_grid(10, 10, {2}, {0.1}, 11, 1), ConfigError);
  CHECK_THROWS_AS(validate_grid(10, 10, {}, {0.1}, 2, 1), ConfigError);
  CHECK_THROWS_AS(validate_grid(10, 10, {2}, {}, 2, 1), ConfigError);
}

TEST_CASE("a one-cell grid selects that cell") {
  auto eng = rng::Engine(rng::mix(27, 0));
  const Eigen::MatrixXd P = planted(eng, 16, 14, 3, 0.05);

  CvOptions opts;
  opts.K = 4;
  opts.q = 1;
  opts.restarts = 2;
  opts.seed = 5;
  opts.max_iter = 120;
  const auto report = cv_grid(P, {3}, {0.1}, opts);

  CHECK(report.selected_d == 3);
  CHECK(report.selected_beta == doctest::Approx(0.1));
  REQUIRE(report.cells.size() == 1);
  CHECK(report.cells[0].errors.size() == 2);
  CHECK(report.cells[0].failed_restarts == 0);
  for (double e : report.cells[0].errors) CHECK(std::isfinite(e));
}

TEST_CASE("grid scoring is deterministic across thread counts") {
  auto eng = rng::Engine(rng::mix(28, 0));
  const Eigen::MatrixXd P = planted(eng, 15, 12, 2, 0.05);

  CvOptions opts;
  opts.K = 3;
  opts.q = 1;
  opts.restarts = 2;
  opts.seed = 31;
  opts.max_iter = 80;
  const auto serial = cv_grid(P, {2, 3}, {0.0, 0.2}, opts);

  opts.threads = 3;
  const auto parallel = cv_grid(P, {2, 3}, {0.0, 0.2}, opts);

  CHECK(serial.selected_d == parallel.selected_d);
  CHECK(serial.selected_beta == parallel.selected_beta);
  REQUIRE(serial.cells.size() == parallel.cells.size());
  for (std::size_t i = 0; i < serial.cells.size(); ++i) {
    CHECK(serial.cells[i].errors == parallel.cells[i].errors);
  }
}

TEST_CASE("cells share masks and starts, so duplicate cells tie exactly") {
  auto eng = rng::Engine(rng::mix(29, 0));
  const Eigen::MatrixXd P = planted(eng, 12, 12, 2, 0.02);

  CvOptions opts;
  opts.K = 3;
  opts.q = 1;
  opts.restarts = 1;  // restart 0 starts from the shared SVD slice
  opts.seed = 8;
  opts.max_iter = 60;
  const auto report = cv_grid(P, {2}, {0.1, 0.1}, opts);
  REQUIRE(report.cells.size() == 2);
  CHECK(report.cells[0].errors == report.cells[1].errors);
  CHECK(report.selected_d == 2);
  CHECK(report.selected_beta == doctest::Approx(0.1));
}

TEST_CASE("sparsity weight drives factors toward zero") {
  // Paired runs from one starting point: a larger penalty can only push
  // more entries below the near-zero threshold.
  auto eng = rng::Engine(rng::mix(30, 0));
  double prev_fraction = -1.0;
  const Eigen::MatrixXd P = planted(eng, 25, 30, 3, 0.05);
  for (const double beta : {0.0, 1.0, 4.0}) {
    double fraction = 0.0;
    NmfOptions opts;
    opts.max_iter = 250;
    opts.tol = 0.0;
    const auto fp = masked_nmf(P, MaskSpec::all_ones(), 5, beta, opts);
    const double near_zero = (fp.O.array() < 1e-8).count() +
                             (fp.V.array() < 1e-8).count();
    fraction = near_zero / static_cast<double>(fp.O.size() + fp.V.size());
    CHECK(fraction >= prev_fraction);
    prev_fraction = fraction;
  }
}

TEST_CASE("full-data fit keeps the best restart") {
  auto eng = rng::Engine(rng::mix(31, 0));
  const Eigen::MatrixXd P = planted(eng, 14, 11, 2, 0.05);

  CvOptions opts;
  opts.restarts = 3;
  opts.seed = 12;
  opts.max_iter = 100;
  const auto best = fit_with_restarts(P, 2, 0.1, opts);
  CHECK(best.d == 2);
  CHECK(best.O.rows() == 14);
  CHECK(best.V.rows() == 11);
  CHECK(non_increasing(best.objective_trace, 1e-9));

  // Rerunning any single restart cannot beat the kept objective.
  const auto single = fit_with_restarts(P, 2, 0.1, [&] {
    CvOptions one = opts;
    one.restarts = 1;
    return one;
  }());
  CHECK(best.objective_trace.back() <=
        single.objective_trace.back() + 1e-12);
}
