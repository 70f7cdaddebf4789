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

#include "afford/cv_grid.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "afford/error.hpp"
#include "afford/io.hpp"
#include "afford/nndsvd.hpp"
#include "afford/rng.hpp"

namespace afford {

double CvCell::mean_error() const {
  if (errors.empty()) return std::numeric_limits<double>::quiet_NaN();
  double sum = 0.0;
  for (const double e : errors) sum += e;
  return sum / static_cast<double>(errors.size());
}

void validate_grid(int m, int n, const std::vector<int>& d_list,
                   const std::vector<double>& beta_list, int K, int q) {
  if (d_list.empty() || beta_list.empty()) {
    throw ConfigError("grid needs at least one d and one beta value");
  }
  if (K < 2 || q < 1 || q >= K || m < K || n < K) {
    throw ConfigError("hold-out parameters K=" + std::to_string(K) +
                      " q=" + std::to_string(q) + " invalid for a " +
                      std::to_string(m) + "x" + std::to_string(n) + " matrix");
  }
  const int d_max = std::min(m, n);
  for (const int d : d_list) {
    if (d < 1 || d > d_max) {
      throw ConfigError("grid rank d=" + std::to_string(d) +
                        " outside [1, " + std::to_string(d_max) + "]");
    }
  }
  for (const double beta : beta_list) {
    if (!(beta >= 0.0)) {
      throw ConfigError("grid sparsity weight must be >= 0, got " +
                        io::format_double(beta));
    }
  }
}

namespace {

std::uint64_t restart_seed(std::uint64_t master, int d, int beta_index,
                           int restart) {
  std::uint64_t s = rng::mix(master, 0xc0ffee00ULL + restart);
  s = rng::mix(s, static_cast<std::uint64_t>(d));
  return rng::mix(s, 0x42000000ULL + beta_index);
}

struct RestartOutcome {
  bool ok = false;
  double error = 0.0;
  double residual = 0.0;
  std::string warning;
};

// One (cell, restart) unit; everything it touches is preallocated, so the
// same work order is immaterial and threads can pick tasks freely.
struct Task {
  int cell_index;
  int d;
  int beta_index;
  double beta;
  int restart;
};

}  // namespace

CvReport cv_grid(const Eigen::MatrixXd& P, const std::vector<int>& d_list,
                 const std::vector<double>& beta_list, const CvOptions& opts) {
  const int m = static_cast<int>(P.rows());
  const int n = static_cast<int>(P.cols());
  validate_grid(m, n, d_list, beta_list, opts.K, opts.q);
  if (opts.restarts < 1) {
    throw ConfigError("cross-validation needs restarts >= 1");
  }

  // One mask per restart, shared across grid cells so their errors are
  // comparable on identical held-out blocks.
  std::vector<HoldoutMask> masks;
  std::vector<Eigen::MatrixXd> m_v;
  masks.reserve(opts.restarts);
  for (int r = 0; r < opts.restarts; ++r) {
    masks.push_back(
        make_block_masks(m, n, opts.K, opts.q, rng::mix(opts.seed, 1000 + r)));
    m_v.push_back(masks.back().validation_matrix());
  }

  // The SVD-based starting point for rank d is the first d columns of the
  // rank-d_max one, so a single decomposition serves the whole grid.
  const int d_max = *std::max_element(d_list.begin(), d_list.end());
  const auto [O_init, V_init] = nndsvd_init(P, d_max);

  CvReport report;
  report.K = opts.K;
  report.q = opts.q;
  report.restarts = opts.restarts;
  report.seed = opts.seed;
  report.cells.reserve(d_list.size() * beta_list.size());

  std::vector<Task> tasks;
  for (std::size_t di = 0; di < d_list.size(); ++di) {
    for (std::size_t bi = 0; bi < beta_list.size(); ++bi) {
      CvCell cell;
      cell.d = d_list[di];
      cell.beta = beta_list[bi];
      const int cell_index = static_cast<int>(report.cells.size());
      report.cells.push_back(cell);
      for (int r = 0; r < opts.restarts; ++r) {
        tasks.push_back({cell_index, d_list[di], static_cast<int>(bi),
                         beta_list[bi], r});
      }
    }
  }

  std::vector<RestartOutcome> outcomes(tasks.size());
  const auto run_task = [&](std::size_t t) {
    const Task& task = tasks[t];
    NmfOptions nmf_opts;
    nmf_opts.max_iter = opts.max_iter;
    nmf_opts.tol = opts.tol;
    nmf_opts.seed = restart_seed(opts.seed, task.d, task.beta_index,
                                 task.restart);
    if (task.restart == 0) {
      nmf_opts.start = {{O_init.leftCols(task.d), V_init.leftCols(task.d)}};
    } else {
      nmf_opts.init = InitKind::kRandomUniform;
    }
    RestartOutcome& out = outcomes[t];
    try {
      const FactorPair fp =
          masked_nmf(P, MaskSpec::block(masks[task.restart]), task.d,
                     task.beta, nmf_opts);
      out.error =
          reconstruction_error(P, fp.O, fp.V, m_v[task.restart], task.beta);
      out.residual = masked_residual(P, fp.O, fp.V, m_v[task.restart]);
      out.ok = true;
    } catch (const Error& e) {
      out.warning = "d=" + std::to_string(task.d) +
                    " beta=" + io::format_double(task.beta) + " restart " +
                    std::to_string(task.restart) + " failed: " + e.what();
    }
  };

  const int threads = std::max(1, opts.threads);
  if (threads == 1 || tasks.size() <= 1) {
    for (std::size_t t = 0; t < tasks.size(); ++t) run_task(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const int workers = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(threads), tasks.size()));
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        while (true) {
          const std::size_t t = next.fetch_add(1);
          if (t >= tasks.size()) break;
          run_task(t);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  for (std::size_t t = 0; t < tasks.size(); ++t) {
    CvCell& cell = report.cells[tasks[t].cell_index];
    const RestartOutcome& out = outcomes[t];
    if (out.ok) {
      cell.errors.push_back(out.error);
      cell.residuals.push_back(out.residual);
    } else {
      ++cell.failed_restarts;
      report.warnings.push_back(out.warning);
    }
  }

  bool have_selection = false;
  double best_mean = 0.0;
  for (const CvCell& cell : report.cells) {
    if (cell.errors.empty()) {
      report.warnings.push_back("cell d=" + std::to_string(cell.d) + " beta=" +
                                io::format_double(cell.beta) +
                                " excluded: all restarts failed");
      continue;
    }
    const double mean = cell.mean_error();
    const bool better =
        !have_selection || mean < best_mean ||
        (mean == best_mean &&
         (cell.d < report.selected_d ||
          (cell.d == report.selected_d && cell.beta < report.selected_beta)));
    if (better) {
      have_selection = true;
      best_mean = mean;
      report.selected_d = cell.d;
      report.selected_beta = cell.beta;
    }
  }
  if (!have_selection) {
    throw Error("cross-validation failed: every grid cell diverged");
  }
  return report;
}

FactorPair fit_with_restarts(const Eigen::MatrixXd& P, int d, double beta,
                             const CvOptions& opts) {
  if (opts.restarts < 1) throw ConfigError("fit needs restarts >= 1");

  FactorPair best;
  bool have_best = false;
  std::string first_failure;
  for (int r = 0; r < opts.restarts; ++r) {
    NmfOptions nmf_opts;
    nmf_opts.max_iter = opts.max_iter;
    nmf_opts.tol = opts.tol;
    nmf_opts.seed = restart_seed(opts.seed, d, 0, r);
    nmf_opts.init = (r == 0) ? InitKind::kNndsvd : InitKind::kRandomUniform;
    try {
      FactorPair fp = masked_nmf(P, MaskSpec::all_ones(), d, beta, nmf_opts);
      if (!have_best ||
          fp.objective_trace.back() < best.objective_trace.back()) {
        best = std::move(fp);
        have_best = true;
      }
    } catch (const Error& e) {
      if (first_failure.empty()) first_failure = e.what();
    }
  }
  if (!have_best) {
    throw Error("all restarts diverged; first failure: " + first_failure);
  }
  return best;
}

void CvReport::save(const std::filesystem::path& path,
                    const std::string& config_hash) const {
  nlohmann::json j;
  j["K"] = K;
  j["q"] = q;
  j["restarts"] = restarts;
  j["seed"] = seed;
  j["selected"] = {{"d", selected_d}, {"beta", selected_beta}};
  j["grid"] = nlohmann::json::array();
  for (const CvCell& cell : cells) {
    nlohmann::json cj;
    cj["d"] = cell.d;
    cj["beta"] = cell.beta;
    cj["errors"] = cell.errors;
    cj["residuals"] = cell.residuals;
    cj["failed_restarts"] = cell.failed_restarts;
    if (!cell.errors.empty()) cj["mean_error"] = cell.mean_error();
    j["grid"].push_back(cj);
  }
  j["warnings"] = warnings;
  if (!config_hash.empty()) j["config"] = config_hash;
  io::atomic_write(path,
                   [&](std::ostream& out) { out << j.dump(2) << '\n'; });
}

}  // namespace afford
