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

#include "afford/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "afford/cv_grid.hpp"
#include "afford/error.hpp"
#include "afford/eval.hpp"
#include "afford/extract.hpp"
#include "afford/io.hpp"
#include "afford/nmf.hpp"
#include "afford/ppmi.hpp"
#include "afford/ranking.hpp"
#include "afford/regression.hpp"
#include "afford/sparse_matrix.hpp"
#include "afford/stats.hpp"
#include "afford/word_vectors.hpp"

namespace afford {
namespace {

LabeledMatrix load_artifact(const RunConfig& cfg, const std::string& name) {
  return LabeledMatrix::load(cfg.out(name), VocabIndex::from_file(cfg.nouns),
                             VocabIndex::from_file(cfg.verbs));
}

Eigen::MatrixXd dense(const SparseMat& s) { return Eigen::MatrixXd(s); }

// Resolves the final-fit (d, beta): explicit config first, then the
// cross-validation selection already on disk.
std::pair<int, double> resolve_rank(const RunConfig& cfg) {
  if (cfg.nmf.d && cfg.nmf.beta) return {*cfg.nmf.d, *cfg.nmf.beta};
  const auto cv_path = cfg.out("cv_report.json");
  if (!std::filesystem::exists(cv_path)) {
    throw ConfigError(
        "nmf.d and nmf.beta are not set and no cv_report.json exists; run "
        "'afford cv' first or set them explicitly");
  }
  std::ifstream in(cv_path);
  nlohmann::json j;
  try {
    in >> j;
    const int d = cfg.nmf.d ? *cfg.nmf.d : j.at("selected").at("d").get<int>();
    const double beta =
        cfg.nmf.beta ? *cfg.nmf.beta
                     : j.at("selected").at("beta").get<double>();
    return {d, beta};
  } catch (const nlohmann::json::exception& e) {
    throw Error(cv_path.string() + ": " + e.what());
  }
}

CvOptions cv_options(const RunConfig& cfg, const CmdOptions& opts) {
  CvOptions cv;
  cv.K = cfg.nmf.K;
  cv.q = cfg.nmf.q;
  cv.restarts = cfg.nmf.restarts;
  cv.seed = cfg.seed;
  cv.max_iter = cfg.nmf.max_iter;
  cv.tol = cfg.nmf.tol;
  cv.threads = opts.effective_threads();
  return cv;
}

}  // namespace

void cmd_extract(const RunConfig& cfg, const CmdOptions&, std::ostream& log) {
  if (cfg.corpus.empty()) {
    throw ConfigError("extract needs a 'corpus' entry in the config");
  }
  auto nouns = VocabIndex::from_file(cfg.nouns);
  auto verbs = VocabIndex::from_file(cfg.verbs);
  ExtractStats stats;
  const LabeledMatrix counts =
      extract_pairs(cfg.corpus, std::move(nouns), std::move(verbs), &stats);
  counts.save(cfg.out("counts.tsv"), cfg.config_hash);
  log << "counts.tsv: " << counts.rows.size() << "x" << counts.cols.size()
      << " with " << counts.values.nonZeros() << " cells from "
      << stats.sentences << " sentences (" << stats.counted << " pairs, "
      << stats.bigrams << " bigrams)\n";
}

void cmd_ppmi(const RunConfig& cfg, const CmdOptions&, std::ostream& log) {
  const LabeledMatrix counts = load_artifact(cfg, "counts.tsv");
  PpmiStats stats;
  const LabeledMatrix P = ppmi(counts, &stats);
  P.save(cfg.out("ppmi.tsv"), cfg.config_hash);
  log << "ppmi.tsv: " << stats.kept << " positive cells (" << stats.clipped
      << " clipped, " << stats.zero_rows << " silent rows, "
      << stats.zero_cols << " silent columns)\n";
}

void cmd_cv(const RunConfig& cfg, const CmdOptions& opts, std::ostream& log) {
  if (cfg.nmf.d_list.empty() || cfg.nmf.beta_list.empty()) {
    throw ConfigError("cv needs nmf.d_list and nmf.beta_list in the config");
  }
  const LabeledMatrix P = load_artifact(cfg, "ppmi.tsv");
  const CvReport report = cv_grid(dense(P.values), cfg.nmf.d_list,
                                  cfg.nmf.beta_list, cv_options(cfg, opts));
  report.save(cfg.out("cv_report.json"), cfg.config_hash);
  log << "cv_report.json: selected d=" << report.selected_d
      << " beta=" << io::format_double(report.selected_beta) << " over "
      << report.cells.size() << " cells\n";
  for (const auto& w : report.warnings) log << "warning: " << w << "\n";
}

void cmd_factorize(const RunConfig& cfg, const CmdOptions& opts,
                   std::ostream& log) {
  const LabeledMatrix P = load_artifact(cfg, "ppmi.tsv");
  const auto [d, beta] = resolve_rank(cfg);
  const FactorPair fp =
      fit_with_restarts(dense(P.values), d, beta, cv_options(cfg, opts));
  save_factors(cfg.out("factors"), fp, P.rows, P.cols, cfg.config_hash);
  log << "factors/: d=" << d << " beta=" << io::format_double(beta)
      << " objective=" << io::format_double(fp.objective_trace.back())
      << " after " << fp.iterations_run << " iterations\n";
}

void cmd_rank(const RunConfig& cfg, const CmdOptions&, std::ostream& log,
              int top_verbs) {
  const LabeledMatrix P = load_artifact(cfg, "ppmi.tsv");
  const FactorPair fp = load_factors(cfg.out("factors"), P.rows, P.cols);
  const SimilarityMatrix sim = similarity_matrix(fp);
  if (!sim.dropped_dims.empty()) {
    log << "warning: dropped " << sim.dropped_dims.size()
        << " all-zero embedding dimensions\n";
  }

  const int top = std::min(top_verbs, P.cols.size());
  io::atomic_write(cfg.out("rankings.tsv"), [&](std::ostream& out) {
    out << "#config=" << cfg.config_hash << "\n";
    out << "object\trank\tverb\tscore\n";
    for (int i = 0; i < P.rows.size(); ++i) {
      const VerbRanking r = object_verb_ranking(fp, sim, i);
      for (int k = 0; k < top; ++k) {
        out << P.rows.at(i) << '\t' << (k + 1) << '\t'
            << P.cols.at(r.order[k]) << '\t'
            << io::format_double(r.scores[r.order[k]]) << '\n';
      }
    }
  });
  log << "rankings.tsv: top " << top << " verbs for " << P.rows.size()
      << " objects\n";
}

void cmd_eval(const RunConfig& cfg, const CmdOptions&, std::ostream& log,
              const std::string& method,
              const std::optional<std::string>& dataset_filter) {
  if (cfg.datasets.empty()) {
    throw ConfigError("eval needs a 'datasets' list in the config");
  }
  if (method != "model" && method != "ppmi" && method != "vectors") {
    throw ConfigError("unknown eval method '" + method +
                      "' (expected model, ppmi, or vectors)");
  }

  const LabeledMatrix P = load_artifact(cfg, "ppmi.tsv");

  // Build the scorer and the vocabularies it is defined over.
  VocabIndex nouns = P.rows;
  VocabIndex verbs = P.cols;
  ObjectScorer scorer;
  std::optional<FactorPair> fp;
  std::optional<SimilarityMatrix> sim;
  std::optional<WordVectors> wv;
  Eigen::MatrixXd verb_vecs;

  if (method == "model") {
    fp = load_factors(cfg.out("factors"), P.rows, P.cols);
    sim = similarity_matrix(*fp);
    scorer = [&](int i) {
      return object_verb_ranking(*fp, *sim, i).scores;
    };
  } else if (method == "ppmi") {
    scorer = [&](int i) { return ppmi_row_ranking(P, i).scores; };
  } else {
    if (cfg.vectors.empty()) {
      throw ConfigError("eval --method vectors needs 'vectors' in the config");
    }
    wv = WordVectors::load(cfg.vectors);
    std::vector<std::string> kept_nouns, kept_verbs;
    std::size_t skipped_nouns = 0, skipped_verbs = 0;
    for (const auto& term : P.rows.entries()) {
      if (wv->find(term)) {
        kept_nouns.push_back(term);
      } else {
        ++skipped_nouns;
      }
    }
    for (const auto& term : P.cols.entries()) {
      if (wv->find(term)) {
        kept_verbs.push_back(term);
      } else {
        ++skipped_verbs;
      }
    }
    if (kept_nouns.empty() || kept_verbs.empty()) {
      throw Error("word vectors cover none of the vocabulary (" +
                  std::to_string(P.rows.size()) + " nouns, " +
                  std::to_string(P.cols.size()) + " verbs)");
    }
    log << "word vectors: " << skipped_nouns << " nouns and " << skipped_verbs
        << " verbs not covered, skipped\n";
    nouns = VocabIndex::from_entries(kept_nouns);
    verbs = VocabIndex::from_entries(kept_verbs);
    verb_vecs.resize(verbs.size(), wv->width());
    for (int k = 0; k < verbs.size(); ++k) {
      verb_vecs.row(k) = wv->vector(*wv->find(verbs.at(k)));
    }
    scorer = [&](int i) {
      const Eigen::VectorXd noun_vec = wv->vector(*wv->find(nouns.at(i)));
      return baseline_cosine_ranking(noun_vec, verb_vecs, i).scores;
    };
  }

  bool matched = false;
  for (const auto& ds : cfg.datasets) {
    if (dataset_filter && ds.name != *dataset_filter) continue;
    matched = true;
    const TruthTable truth = TruthTable::load(ds.truth, ds.cutoff);
    AaucReport report = evaluate_dataset(scorer, nouns, verbs, truth, ds.name);
    report.method = method;
    const std::string stem = "aauc_" + ds.name + "_" + method;
    report.save(cfg.out(stem + ".tsv"), cfg.out(stem + ".json"),
                cfg.out(stem + "_hist.tsv"), cfg.config_hash);
    log << stem << ".tsv: mean " << io::format_double(report.mean) << " over "
        << report.objects.size() << " objects (" << report.n_verbs
        << " verbs)\n";
  }
  if (!matched) {
    throw ConfigError("dataset filter matches no configured dataset");
  }
}

void cmd_regress(const RunConfig& cfg, const CmdOptions& opts,
                 std::ostream& log) {
  if (cfg.regression.targets.empty()) {
    throw ConfigError("regress needs regression.targets in the config");
  }
  const LabeledMatrix P = load_artifact(cfg, "ppmi.tsv");
  const FactorPair fp = load_factors(cfg.out("factors"), P.rows, P.cols);
  const TargetMatrix targets =
      TargetMatrix::load(cfg.regression.targets, P.rows, P);
  log << "targets: " << targets.Y.rows() << " objects kept ("
      << targets.rows_dropped_unknown << " unknown, "
      << targets.rows_dropped_zero << " without co-occurrences, "
      << targets.rows_averaged << " merged)\n";

  Eigen::MatrixXd O_sub(targets.noun_indices.size(), fp.O.cols());
  for (std::size_t r = 0; r < targets.noun_indices.size(); ++r) {
    O_sub.row(static_cast<int>(r)) = fp.O.row(targets.noun_indices[r]);
  }

  const auto grid = lambda_grid(cfg.regression.grid_points);
  const std::uint64_t seed =
      cfg.regression.seed ? *cfg.regression.seed : cfg.seed;
  const RegressionFit fit = fit_all_dims(O_sub, targets, grid, seed,
                                         opts.effective_threads());

  // Out-of-fold predictions per dimension; failed dimensions contribute a
  // zero column and surface as empty verb rankings.
  Eigen::MatrixXd yhat =
      Eigen::MatrixXd::Zero(targets.Y.rows(), targets.Y.cols());
  for (std::size_t i = 0; i < fit.dims.size(); ++i) {
    if (fit.dims[i].ok) yhat.col(static_cast<int>(i)) = fit.dims[i].yhat;
  }
  FactorPair fp_sub = fp;
  fp_sub.O = O_sub;
  const VerbAssignment assignment = spose_verb_assignment(yhat, fp_sub);

  save_regression(cfg.out("regression.json"),
                  cfg.out("regression_summary.tsv"), fit, targets, O_sub,
                  assignment, P.cols, cfg.regression.top_verbs,
                  cfg.config_hash);
  int failed = 0;
  for (const auto& dim : fit.dims) {
    if (!dim.ok) ++failed;
  }
  log << "regression.json: " << fit.dims.size() << " dimensions fit";
  if (failed > 0) log << " (" << failed << " flagged)";
  log << "\n";
}

void cmd_report(const RunConfig& cfg, const CmdOptions&, std::ostream& log) {
  nlohmann::json report;
  report["config"] = cfg.config_hash;

  if (std::filesystem::exists(cfg.out("cv_report.json"))) {
    std::ifstream in(cfg.out("cv_report.json"));
    nlohmann::json cv;
    in >> cv;
    report["selected"] = cv.value("selected", nlohmann::json());
  }

  // Collect every per-dataset evaluation in the output directory.
  struct EvalEntry {
    std::string dataset;
    std::string method;
    double mean = 0.0;
    std::map<std::string, double> per_object;
  };
  std::vector<EvalEntry> entries;
  std::vector<std::filesystem::path> json_files;
  for (const auto& e : std::filesystem::directory_iterator(cfg.output_dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") {
      json_files.push_back(e.path());
    }
  }
  std::sort(json_files.begin(), json_files.end());
  for (const auto& path : json_files) {
    std::ifstream in(path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception&) {
      continue;  // unrelated JSON in the output directory
    }
    if (j.value("type", std::string()) != "aauc") continue;
    EvalEntry entry;
    entry.dataset = j.value("name", std::string());
    entry.method = j.value("method", std::string());
    entry.mean = j.value("mean_aauc", 0.0);
    auto tsv = path;
    tsv.replace_extension(".tsv");
    for (const auto& line : io::read_lines(tsv)) {
      const auto fields = io::split_tabs(line);
      if (fields.size() < 2 || fields[0] == "object") continue;
      entry.per_object[fields[0]] = std::stod(fields[1]);
    }
    entries.push_back(std::move(entry));
  }

  io::atomic_write(cfg.out("table_aauc.tsv"), [&](std::ostream& out) {
    out << "dataset\tmethod\tmean_aauc\tobjects\n";
    for (const auto& e : entries) {
      out << e.dataset << '\t' << e.method << '\t'
          << io::format_double(e.mean) << '\t' << e.per_object.size() << '\n';
    }
  });

  // Paired comparisons between methods evaluated on the same dataset,
  // joined on object names.
  report["ttests"] = nlohmann::json::array();
  for (std::size_t a = 0; a < entries.size(); ++a) {
    for (std::size_t b = a + 1; b < entries.size(); ++b) {
      if (entries[a].dataset != entries[b].dataset) continue;
      std::vector<double> xs, ys;
      for (const auto& [object, value] : entries[a].per_object) {
        const auto it = entries[b].per_object.find(object);
        if (it != entries[b].per_object.end()) {
          xs.push_back(value);
          ys.push_back(it->second);
        }
      }
      nlohmann::json tj;
      tj["dataset"] = entries[a].dataset;
      tj["method_a"] = entries[a].method;
      tj["method_b"] = entries[b].method;
      tj["n"] = xs.size();
      try {
        const TTestResult res = paired_ttest(
            Eigen::Map<const Eigen::VectorXd>(xs.data(), xs.size()),
            Eigen::Map<const Eigen::VectorXd>(ys.data(), ys.size()));
        tj["t"] = res.t;
        tj["p"] = res.p;
        tj["df"] = res.df;
      } catch (const Error& e) {
        tj["note"] = e.what();
      }
      report["ttests"].push_back(tj);
    }
  }

  nlohmann::json means;
  for (const auto& e : entries) {
    means[e.dataset][e.method] = e.mean;
  }
  report["aauc"] = means;

  if (std::filesystem::exists(cfg.out("regression.json"))) {
    std::ifstream in(cfg.out("regression.json"));
    nlohmann::json rj;
    in >> rj;
    // Appendix-style table: dimensions sorted by descending correlation.
    std::vector<nlohmann::json> dims;
    for (const auto& dj : rj.value("dimensions", nlohmann::json::array())) {
      if (dj.value("ok", false)) dims.push_back(dj);
    }
    std::sort(dims.begin(), dims.end(),
              [](const nlohmann::json& x, const nlohmann::json& y) {
                return x.value("r", 0.0) > y.value("r", 0.0);
              });
    io::atomic_write(cfg.out("table_dimensions.tsv"), [&](std::ostream& out) {
      out << "r\tp\tlabel\ttaxonomy\ttop_verbs\n";
      for (const auto& dj : dims) {
        out << io::format_double(dj.value("r", 0.0)) << '\t'
            << io::format_double(dj.value("p", 1.0)) << '\t'
            << dj.value("label", std::string()) << "\t-\t";
        const auto top = dj.value("top_verbs", std::vector<std::string>());
        for (std::size_t k = 0; k < top.size(); ++k) {
          if (k > 0) out << ", ";
          out << top[k];
        }
        out << '\n';
      }
    });
    nlohmann::json summary = nlohmann::json::array();
    for (const auto& dj : dims) {
      summary.push_back({{"label", dj.value("label", std::string())},
                         {"r", dj.value("r", 0.0)},
                         {"p", dj.value("p", 1.0)}});
    }
    report["regression"] = summary;
    log << "table_dimensions.tsv: " << dims.size() << " dimensions\n";
  }

  io::atomic_write(cfg.out("report.json"), [&](std::ostream& out) {
    out << report.dump(2) << '\n';
  });
  log << "report.json: " << entries.size() << " evaluations, "
      << report["ttests"].size() << " paired tests\n";
}

}  // namespace afford
