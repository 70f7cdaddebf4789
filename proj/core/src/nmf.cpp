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

#include "afford/nmf.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "afford/error.hpp"
#include "afford/io.hpp"
#include "afford/nndsvd.hpp"
#include "afford/rng.hpp"

namespace afford {
namespace {

// Penalized training objective the update sweeps monotonically decrease:
// half the masked squared error plus beta times the factor mass.
double objective(const Eigen::MatrixXd& A, const Eigen::MatrixXd& m_t,
                 const Eigen::MatrixXd& O, const Eigen::MatrixXd& V,
                 double beta) {
  const double fit =
      (A - (m_t.array() * (O * V.transpose()).array()).matrix()).squaredNorm();
  return 0.5 * fit + beta * (O.sum() + V.sum());
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> random_start(
    const Eigen::MatrixXd& P, int d, std::uint64_t seed) {
  const double scale = std::sqrt(P.mean() / static_cast<double>(d));
  rng::Engine eng(rng::mix(seed, 0x616666ULL));
  Eigen::MatrixXd O(P.rows(), d);
  Eigen::MatrixXd V(P.cols(), d);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < O.rows(); ++i) O(i, j) = scale * rng::uniform01(eng);
  }
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < V.rows(); ++i) V(i, j) = scale * rng::uniform01(eng);
  }
  return {std::move(O), std::move(V)};
}

void check_finite(const Eigen::MatrixXd& M, const char* which, int iter, int d,
                  double beta) {
  if (M.allFinite()) return;
  throw Error(std::string("factorization diverged: non-finite entries in ") +
              which + " at iteration " + std::to_string(iter) +
              " (d=" + std::to_string(d) + ", beta=" + io::format_double(beta) +
              ")");
}

}  // namespace

FactorPair masked_nmf(const Eigen::MatrixXd& P, const MaskSpec& mask, int d,
                      double beta, const NmfOptions& opts) {
  const int m = static_cast<int>(P.rows());
  const int n = static_cast<int>(P.cols());
  if (d < 1 || d > std::min(m, n)) {
    throw ConfigError("rank d=" + std::to_string(d) + " outside [1, " +
                      std::to_string(std::min(m, n)) + "]");
  }
  if (beta < 0.0) {
    throw ConfigError("sparsity weight must be >= 0, got " +
                      io::format_double(beta));
  }
  if ((P.array() < 0.0).any()) {
    throw Error("factorization input has negative entries");
  }

  const Eigen::MatrixXd m_t = mask.training(m, n);
  const Eigen::MatrixXd A = (m_t.array() * P.array()).matrix();
  const double eps = (beta == 0.0) ? 1e-12 : 0.0;

  FactorPair fp;
  fp.beta = beta;
  fp.d = d;
  fp.seed = opts.seed;
  if (opts.start) {
    fp.O = opts.start->first;
    fp.V = opts.start->second;
    if (fp.O.rows() != m || fp.O.cols() != d || fp.V.rows() != n ||
        fp.V.cols() != d) {
      throw ConfigError("starting point shape does not match problem");
    }
  } else if (opts.init == InitKind::kNndsvd) {
    std::tie(fp.O, fp.V) = nndsvd_init(P, d);
  } else {
    std::tie(fp.O, fp.V) = random_start(P, d, opts.seed);
  }

  fp.objective_trace.push_back(objective(A, m_t, fp.O, fp.V, beta));

  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    {
      const Eigen::MatrixXd R =
          (m_t.array() * (fp.O * fp.V.transpose()).array()).matrix();
      const Eigen::MatrixXd numer = A * fp.V;
      const Eigen::MatrixXd denom =
          ((R * fp.V).array() + beta + eps).matrix();
      fp.O = (fp.O.array() * numer.array() / denom.array()).matrix();
      check_finite(fp.O, "O", iter, d, beta);
    }
    {
      const Eigen::MatrixXd R =
          (m_t.array() * (fp.O * fp.V.transpose()).array()).matrix();
      const Eigen::MatrixXd numer = A.transpose() * fp.O;
      const Eigen::MatrixXd denom =
          ((R.transpose() * fp.O).array() + beta + eps).matrix();
      fp.V = (fp.V.array() * numer.array() / denom.array()).matrix();
      check_finite(fp.V, "V", iter, d, beta);
    }

    fp.objective_trace.push_back(objective(A, m_t, fp.O, fp.V, beta));
    fp.iterations_run = iter;

    const std::size_t t = fp.objective_trace.size() - 1;
    if (t >= 10) {
      const double prev = fp.objective_trace[t - 10];
      const double cur = fp.objective_trace[t];
      if (std::abs(prev - cur) < opts.tol * std::max(std::abs(prev), 1e-30)) {
        break;
      }
    }
  }
  return fp;
}

double reconstruction_error(const Eigen::MatrixXd& P, const Eigen::MatrixXd& O,
                            const Eigen::MatrixXd& V,
                            const Eigen::MatrixXd& m_v, double beta) {
  return masked_residual(P, O, V, m_v) + beta * (O.sum() + V.sum());
}

double masked_residual(const Eigen::MatrixXd& P, const Eigen::MatrixXd& O,
                       const Eigen::MatrixXd& V, const Eigen::MatrixXd& m_v) {
  if (O.rows() != P.rows() || V.rows() != P.cols() || O.cols() != V.cols()) {
    throw Error("factor shapes (" + std::to_string(O.rows()) + "x" +
                std::to_string(O.cols()) + ", " + std::to_string(V.rows()) +
                "x" + std::to_string(V.cols()) + ") do not factor a " +
                std::to_string(P.rows()) + "x" + std::to_string(P.cols()) +
                " matrix");
  }
  if (m_v.rows() != P.rows() || m_v.cols() != P.cols()) {
    throw Error("mask shape " + std::to_string(m_v.rows()) + "x" +
                std::to_string(m_v.cols()) + " does not match matrix " +
                std::to_string(P.rows()) + "x" + std::to_string(P.cols()));
  }
  return (m_v.array() * (P - O * V.transpose()).array()).matrix().squaredNorm();
}

namespace {

void save_factor_tsv(const std::filesystem::path& path,
                     const Eigen::MatrixXd& M, const VocabIndex& labels,
                     const char* label_header) {
  io::atomic_write(path, [&](std::ostream& out) {
    out << label_header;
    for (int j = 0; j < M.cols(); ++j) out << "\tdim_" << (j + 1);
    out << '\n';
    for (int i = 0; i < M.rows(); ++i) {
      out << labels.at(i);
      for (int j = 0; j < M.cols(); ++j) {
        out << '\t' << io::format_double(M(i, j));
      }
      out << '\n';
    }
  });
}

Eigen::MatrixXd load_factor_tsv(const std::filesystem::path& path,
                                const VocabIndex& labels, int d) {
  const auto lines = io::read_lines(path);
  if (lines.size() != static_cast<std::size_t>(labels.size()) + 1) {
    throw Error(path.string() + ": expected " +
                std::to_string(labels.size() + 1) + " lines, got " +
                std::to_string(lines.size()));
  }
  Eigen::MatrixXd M(labels.size(), d);
  for (int i = 0; i < labels.size(); ++i) {
    const auto fields = io::split_tabs(lines[i + 1]);
    if (static_cast<int>(fields.size()) != d + 1) {
      throw Error(path.string() + ":" + std::to_string(i + 2) +
                  ": expected " + std::to_string(d + 1) + " fields");
    }
    if (fields[0] != labels.at(i)) {
      throw Error(path.string() + ":" + std::to_string(i + 2) +
                  ": label '" + fields[0] + "' does not match vocabulary '" +
                  labels.at(i) + "'");
    }
    for (int j = 0; j < d; ++j) M(i, j) = std::stod(fields[j + 1]);
  }
  return M;
}

}  // namespace

void save_factors(const std::filesystem::path& dir, const FactorPair& fp,
                  const VocabIndex& rows, const VocabIndex& cols,
                  const std::string& config_hash) {
  std::filesystem::create_directories(dir);
  save_factor_tsv(dir / "O.tsv", fp.O, rows, "noun");
  save_factor_tsv(dir / "V.tsv", fp.V, cols, "verb");

  nlohmann::json meta;
  meta["d"] = fp.d;
  meta["beta"] = fp.beta;
  meta["seed"] = fp.seed;
  meta["iterations"] = fp.iterations_run;
  meta["objective"] =
      fp.objective_trace.empty() ? 0.0 : fp.objective_trace.back();
  meta["rows"] = rows.size();
  meta["cols"] = cols.size();
  if (!config_hash.empty()) meta["config"] = config_hash;
  io::atomic_write(dir / "factors.json",
                   [&](std::ostream& out) { out << meta.dump(2) << '\n'; });
}

FactorPair load_factors(const std::filesystem::path& dir,
                        const VocabIndex& rows, const VocabIndex& cols) {
  std::ifstream meta_in(dir / "factors.json");
  if (!meta_in) {
    throw Error("cannot open " + (dir / "factors.json").string());
  }
  nlohmann::json meta;
  try {
    meta_in >> meta;
  } catch (const nlohmann::json::exception& e) {
    throw Error((dir / "factors.json").string() + ": " + e.what());
  }

  FactorPair fp;
  fp.d = meta.at("d").get<int>();
  fp.beta = meta.at("beta").get<double>();
  fp.seed = meta.at("seed").get<std::uint64_t>();
  fp.iterations_run = meta.at("iterations").get<int>();
  fp.objective_trace.push_back(meta.at("objective").get<double>());
  fp.O = load_factor_tsv(dir / "O.tsv", rows, fp.d);
  fp.V = load_factor_tsv(dir / "V.tsv", cols, fp.d);
  return fp;
}

}  // namespace afford
