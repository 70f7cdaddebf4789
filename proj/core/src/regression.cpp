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

#include "afford/regression.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <thread>

#include <nlohmann/json.hpp>

#include "afford/error.hpp"
#include "afford/io.hpp"
#include "afford/rng.hpp"
#include "afford/stats.hpp"

namespace afford {

TargetMatrix TargetMatrix::load(const std::filesystem::path& path,
                                const VocabIndex& nouns,
                                const LabeledMatrix& P) {
  const auto lines = io::read_lines(path);
  if (lines.empty()) throw Error("empty target table: " + path.string());

  const auto header = io::split_tabs(lines[0]);
  if (header.size() < 2 || header[0] != "object") {
    throw Error(path.string() + ":1: expected header 'object<TAB>dim_1...'");
  }
  std::vector<std::string> dim_labels(header.begin() + 1, header.end());
  const int D = static_cast<int>(dim_labels.size());

  std::vector<std::pair<std::string, Eigen::VectorXd>> raw;
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    if (lines[ln].empty()) continue;
    const auto fields = io::split_tabs(lines[ln]);
    if (static_cast<int>(fields.size()) != D + 1) {
      throw Error(path.string() + ":" + std::to_string(ln + 1) +
                  ": expected " + std::to_string(D + 1) + " fields, got " +
                  std::to_string(fields.size()));
    }
    Eigen::VectorXd row(D);
    for (int j = 0; j < D; ++j) {
      char* end = nullptr;
      row[j] = std::strtod(fields[j + 1].c_str(), &end);
      if (end != fields[j + 1].c_str() + fields[j + 1].size()) {
        throw Error(path.string() + ":" + std::to_string(ln + 1) +
                    ": value is not a number: " + fields[j + 1]);
      }
    }
    raw.emplace_back(fields[0], std::move(row));
  }
  return align(raw, std::move(dim_labels), nouns, P);
}

TargetMatrix TargetMatrix::align(
    const std::vector<std::pair<std::string, Eigen::VectorXd>>& raw_rows,
    std::vector<std::string> dim_labels, const VocabIndex& nouns,
    const LabeledMatrix& P) {
  if (P.rows.size() != nouns.size()) {
    throw Error("association matrix rows do not match the noun vocabulary");
  }

  Eigen::VectorXd row_mass = Eigen::VectorXd::Zero(nouns.size());
  for (int i = 0; i < P.values.outerSize(); ++i) {
    for (SparseMat::InnerIterator it(P.values, i); it; ++it) {
      row_mass[it.row()] += std::abs(it.value());
    }
  }

  TargetMatrix out;
  out.dim_labels = std::move(dim_labels);
  const int D = static_cast<int>(out.dim_labels.size());

  std::map<int, std::pair<Eigen::VectorXd, int>> sums;  // noun -> (sum, count)
  for (const auto& [label, row] : raw_rows) {
    const auto idx = nouns.find(VocabIndex::normalize(label));
    if (!idx) {
      ++out.rows_dropped_unknown;
      continue;
    }
    if (row_mass[*idx] == 0.0) {
      ++out.rows_dropped_zero;
      continue;
    }
    auto [it, inserted] = sums.try_emplace(*idx, Eigen::VectorXd::Zero(D), 0);
    it->second.first += row;
    it->second.second += 1;
    if (!inserted) ++out.rows_averaged;
  }
  if (sums.empty()) {
    throw Error("no target rows survive alignment against the vocabulary");
  }

  out.Y.resize(static_cast<int>(sums.size()), D);
  int r = 0;
  for (const auto& [idx, acc] : sums) {
    out.noun_indices.push_back(idx);
    out.Y.row(r++) = acc.first / static_cast<double>(acc.second);
  }
  return out;
}

namespace {

constexpr double kCoordTol = 1e-8;
constexpr int kMaxSweeps = 10000;

// Coordinate descent on the normalized problem, written against the
// precomputed Gram pieces G = OᵀO/m and c = Oᵀy/m. g = Gw is maintained
// incrementally. Coordinates with an identically-zero column are skipped.
LassoResult cd_lasso(const Eigen::MatrixXd& G, const Eigen::VectorXd& c,
                     double lambda, Eigen::VectorXd w) {
  const int d = static_cast<int>(c.size());
  Eigen::VectorXd g = G * w;

  LassoResult res;
  for (int sweep = 1; sweep <= kMaxSweeps; ++sweep) {
    double max_change = 0.0;
    for (int j = 0; j < d; ++j) {
      const double gjj = G(j, j);
      if (gjj == 0.0) continue;
      const double rho = c[j] - g[j] + gjj * w[j];
      const double next = std::max(0.0, (rho - lambda) / gjj);
      const double delta = next - w[j];
      if (delta != 0.0) {
        w[j] = next;
        g += G.col(j) * delta;
        max_change = std::max(max_change, std::abs(delta));
      }
    }
    res.sweeps = sweep;
    res.final_gap = max_change;
    if (max_change < kCoordTol) {
      res.w = std::move(w);
      return res;
    }
  }
  res.converged = false;
  res.w = std::move(w);
  return res;
}

}  // namespace

LassoResult nonneg_lasso(const Eigen::MatrixXd& O, const Eigen::VectorXd& y,
                         double lambda) {
  if (O.rows() != y.size()) {
    throw Error("design matrix has " + std::to_string(O.rows()) +
                " rows but the target has " + std::to_string(y.size()));
  }
  if (lambda < 0.0) {
    throw ConfigError("penalty must be >= 0, got " + io::format_double(lambda));
  }
  const double m = static_cast<double>(O.rows());
  const Eigen::MatrixXd G = (O.transpose() * O) / m;
  const Eigen::VectorXd c = (O.transpose() * y) / m;
  return cd_lasso(G, c, lambda, Eigen::VectorXd::Zero(O.cols()));
}

std::vector<double> lambda_grid(int points) {
  if (points < 1) throw ConfigError("penalty grid needs at least one point");
  std::vector<double> grid(points);
  if (points == 1) {
    grid[0] = 1e-7;
    return grid;
  }
  const double lo = std::log10(1e-7);
  const double hi = std::log10(1e3);
  for (int i = 0; i < points; ++i) {
    grid[i] = std::pow(10.0, lo + (hi - lo) * i / (points - 1));
  }
  return grid;
}

CvLambdaResult cv_lambda(const Eigen::MatrixXd& O, const Eigen::VectorXd& y,
                         const std::vector<double>& grid, int folds,
                         std::uint64_t seed) {
  if (grid.empty()) throw ConfigError("penalty grid is empty");
  const int m = static_cast<int>(O.rows());
  if (m < 2) throw Error("cross-validation needs at least 2 rows");
  if (folds < 2 || folds > m) {
    throw ConfigError("fold count " + std::to_string(folds) +
                      " invalid for " + std::to_string(m) + " rows");
  }

  CvLambdaResult res;
  res.grid = grid;
  std::sort(res.grid.begin(), res.grid.end());

  // Balanced seeded fold assignment.
  std::vector<int> order(m);
  for (int i = 0; i < m; ++i) order[i] = i;
  rng::Engine eng(rng::mix(seed, 0xf01d5ULL));
  rng::shuffle(order, eng);
  res.fold.assign(m, 0);
  for (int pos = 0; pos < m; ++pos) res.fold[order[pos]] = pos % folds;

  const int L = static_cast<int>(res.grid.size());
  res.cv_curve.assign(L, 0.0);
  // w per (lambda, fold), kept so yhat can be assembled after selection.
  std::vector<std::vector<Eigen::VectorXd>> weights(
      L, std::vector<Eigen::VectorXd>(folds));

  for (int f = 0; f < folds; ++f) {
    std::vector<int> train, test;
    for (int i = 0; i < m; ++i) {
      (res.fold[i] == f ? test : train).push_back(i);
    }
    Eigen::MatrixXd O_train(train.size(), O.cols());
    Eigen::VectorXd y_train(train.size());
    for (std::size_t r = 0; r < train.size(); ++r) {
      O_train.row(static_cast<int>(r)) = O.row(train[r]);
      y_train[static_cast<int>(r)] = y[train[r]];
    }
    Eigen::MatrixXd O_test(test.size(), O.cols());
    Eigen::VectorXd y_test(test.size());
    for (std::size_t r = 0; r < test.size(); ++r) {
      O_test.row(static_cast<int>(r)) = O.row(test[r]);
      y_test[static_cast<int>(r)] = y[test[r]];
    }

    const double mt = static_cast<double>(train.size());
    const Eigen::MatrixXd G = (O_train.transpose() * O_train) / mt;
    const Eigen::VectorXd c = (O_train.transpose() * y_train) / mt;

    // Walk the penalties from strongest down, warm-starting each fit; at
    // the top of the grid w = 0 is (nearly) exact, so the path is cheap.
    Eigen::VectorXd w = Eigen::VectorXd::Zero(O.cols());
    for (int li = L - 1; li >= 0; --li) {
      LassoResult fit = cd_lasso(G, c, res.grid[li], w);
      if (!fit.converged) res.all_converged = false;
      w = fit.w;
      res.cv_curve[li] += (y_test - O_test * w).squaredNorm();
      weights[li][f] = std::move(fit.w);
    }
  }
  for (double& v : res.cv_curve) v /= static_cast<double>(m);

  int best = 0;
  for (int li = 1; li < L; ++li) {
    if (res.cv_curve[li] <= res.cv_curve[best]) best = li;  // ties take larger
  }
  res.lambda_star = res.grid[best];

  res.yhat.resize(m);
  for (int i = 0; i < m; ++i) {
    res.yhat[i] = O.row(i).dot(weights[best][res.fold[i]]);
  }
  return res;
}

RegressionFit fit_all_dims(const Eigen::MatrixXd& O, const TargetMatrix& Y,
                           const std::vector<double>& grid,
                           std::uint64_t seed, int threads) {
  if (O.rows() != Y.Y.rows()) {
    throw Error("embedding has " + std::to_string(O.rows()) +
                " rows but targets have " + std::to_string(Y.Y.rows()));
  }
  const int D = static_cast<int>(Y.Y.cols());
  RegressionFit fit;
  fit.noun_indices = Y.noun_indices;
  fit.dims.resize(D);

  const auto run_dim = [&](int i) {
    DimFit& dim = fit.dims[i];
    dim.label = Y.dim_labels[i];
    try {
      const Eigen::VectorXd y = Y.Y.col(i);
      CvLambdaResult cv =
          cv_lambda(O, y, grid, 2, rng::mix(seed, 0xd100 + i));
      dim.lambda_star = cv.lambda_star;
      dim.cv_curve = cv.cv_curve;
      dim.yhat = cv.yhat;

      LassoResult refit = nonneg_lasso(O, y, cv.lambda_star);
      dim.w = refit.w;
      dim.converged = refit.converged && cv.all_converged;

      dim.r = pearson(y, dim.yhat);
      dim.p = pearson_p_value(dim.r, static_cast<int>(y.size()));
      dim.r_refit = pearson(y, O * dim.w);
      dim.p_refit = pearson_p_value(dim.r_refit, static_cast<int>(y.size()));
    } catch (const Error& e) {
      dim.ok = false;
      dim.error = e.what();
    }
  };

  if (threads <= 1 || D <= 1) {
    for (int i = 0; i < D; ++i) run_dim(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < std::min(threads, D); ++w) {
      pool.emplace_back([&] {
        while (true) {
          const int i = next.fetch_add(1);
          if (i >= D) break;
          run_dim(i);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  return fit;
}

std::vector<BestMatch> best_match_correlation(const Eigen::MatrixXd& Y,
                                              const Eigen::MatrixXd& O) {
  if (Y.rows() != O.rows()) {
    throw Error("row counts disagree: " + std::to_string(Y.rows()) + " vs " +
                std::to_string(O.rows()));
  }
  std::vector<BestMatch> out(Y.cols());
  for (int i = 0; i < Y.cols(); ++i) {
    BestMatch& bm = out[i];
    for (int j = 0; j < O.cols(); ++j) {
      double r;
      try {
        r = pearson(Y.col(i), O.col(j));
      } catch (const Error&) {
        r = 0.0;  // zero-variance pairing scores 0 by convention
        bm.flagged = true;
      }
      if (bm.dim == -1 || r > bm.r) {
        bm.dim = j;
        bm.r = r;
      }
    }
  }
  return out;
}

VerbAssignment spose_verb_assignment(const Eigen::MatrixXd& yhat,
                                     const FactorPair& fp) {
  if (yhat.rows() != fp.O.rows()) {
    throw Error("prediction matrix has " + std::to_string(yhat.rows()) +
                " rows but the embedding has " + std::to_string(fp.O.rows()));
  }
  const Eigen::MatrixXd Yt = yhat.cwiseMax(0.0);  // clamp numerical noise
  const int D = static_cast<int>(Yt.cols());
  const int n = static_cast<int>(fp.V.rows());

  const Eigen::MatrixXd G = fp.O.transpose() * fp.O;
  const Eigen::VectorXd col_sq =
      ((fp.V * G).array() * fp.V.array()).rowwise().sum();
  const Eigen::MatrixXd numer =
      (Yt.transpose() * fp.O) * fp.V.transpose();  // D×n

  VerbAssignment out;
  out.rankings.reserve(D);
  out.empty_flags.assign(D, false);
  for (int h = 0; h < D; ++h) {
    const double y_norm = Yt.col(h).norm();
    if (y_norm == 0.0) {
      out.empty_flags[h] = true;
      out.rankings.push_back(VerbRanking{h, Eigen::VectorXd(), {}});
      continue;
    }
    Eigen::VectorXd scores(n);
    for (int k = 0; k < n; ++k) {
      const double p_norm = std::sqrt(std::max(col_sq[k], 0.0));
      scores[k] = (p_norm == 0.0) ? 0.0 : numer(h, k) / (y_norm * p_norm);
    }
    out.rankings.push_back(rank_scores(h, std::move(scores)));
  }
  return out;
}

Eigen::VectorXd contribution_analysis(const Eigen::VectorXd& w,
                                      const Eigen::MatrixXd& O) {
  if (w.size() != O.cols()) {
    throw Error("weight length " + std::to_string(w.size()) +
                " does not match " + std::to_string(O.cols()) + " columns");
  }
  if ((w.array() < 0.0).any()) throw Error("weights must be non-negative");

  Eigen::VectorXd c(w.size());
  for (int j = 0; j < w.size(); ++j) c[j] = w[j] * O.col(j).norm();
  const double total = c.sum();
  if (total == 0.0) return Eigen::VectorXd::Zero(w.size());
  return c * (100.0 / total);
}

void save_regression(const std::filesystem::path& json_path,
                     const std::filesystem::path& summary_path,
                     const RegressionFit& fit, const TargetMatrix& targets,
                     const Eigen::MatrixXd& O, const VerbAssignment& verbs,
                     const VocabIndex& verb_vocab, int top_verbs,
                     const std::string& config_hash) {
  nlohmann::json j;
  j["objects"] = fit.noun_indices.size();
  j["dropped_unknown"] = targets.rows_dropped_unknown;
  j["dropped_no_cooccurrence"] = targets.rows_dropped_zero;
  j["rows_averaged"] = targets.rows_averaged;
  if (!config_hash.empty()) j["config"] = config_hash;
  j["dimensions"] = nlohmann::json::array();

  for (std::size_t i = 0; i < fit.dims.size(); ++i) {
    const DimFit& dim = fit.dims[i];
    nlohmann::json dj;
    dj["label"] = dim.label;
    dj["ok"] = dim.ok;
    if (!dim.ok) {
      dj["error"] = dim.error;
      j["dimensions"].push_back(dj);
      continue;
    }
    dj["lambda"] = dim.lambda_star;
    dj["r"] = dim.r;
    dj["p"] = dim.p;
    dj["r_refit"] = dim.r_refit;
    dj["p_refit"] = dim.p_refit;
    dj["converged"] = dim.converged;
    dj["weights"] = std::vector<double>(dim.w.data(),
                                        dim.w.data() + dim.w.size());
    const Eigen::VectorXd contrib = contribution_analysis(dim.w, O);
    dj["contributions_pct"] =
        std::vector<double>(contrib.data(), contrib.data() + contrib.size());
    std::vector<std::string> top;
    if (i < verbs.rankings.size() && !verbs.empty_flags[i]) {
      const auto& order = verbs.rankings[i].order;
      for (int k = 0; k < top_verbs && k < static_cast<int>(order.size());
           ++k) {
        top.push_back(verb_vocab.at(order[k]));
      }
    }
    dj["top_verbs"] = top;
    j["dimensions"].push_back(dj);
  }
  io::atomic_write(json_path,
                   [&](std::ostream& out) { out << j.dump(2) << '\n'; });

  io::atomic_write(summary_path, [&](std::ostream& out) {
    out << "r\tp\tlabel\ttaxonomy\ttop_verbs\n";
    for (std::size_t i = 0; i < fit.dims.size(); ++i) {
      const DimFit& dim = fit.dims[i];
      if (!dim.ok) {
        out << "-\t-\t" << dim.label << "\t-\t-\n";
        continue;
      }
      out << io::format_double(dim.r) << '\t' << io::format_double(dim.p)
          << '\t' << dim.label << "\t-\t";
      if (i < verbs.rankings.size() && !verbs.empty_flags[i]) {
        const auto& order = verbs.rankings[i].order;
        for (int k = 0; k < top_verbs && k < static_cast<int>(order.size());
             ++k) {
          if (k > 0) out << ", ";
          out << verb_vocab.at(order[k]);
        }
      }
      out << '\n';
    }
  });
}

}  // namespace afford
