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

// afford: noun-verb affordance modeling pipeline.
//
//   afford <command> --config run.json [--output-dir DIR] [--threads N]
//
// Commands chain through artifacts in the output directory:
//   extract -> counts.tsv
//   ppmi -> ppmi.tsv
//   cv -> cv_report.json
//   factorize -> factors/{O.tsv,V.tsv,factors.json}
//   rank -> rankings.tsv
//   eval -> aauc_<dataset>_<method>.{tsv,json} + histogram
//   regress -> regression.json, regression_summary.tsv
//   report -> report.json, table_aauc.tsv, table_dimensions.tsv
//
// Exit codes: 0 success, 1 runtime failure, 2 invalid configuration.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "afford/error.hpp"
#include "afford/pipeline.hpp"
#include "afford/version.hpp"

namespace {

struct GlobalArgs {
  std::string config_path;
  std::optional<std::string> output_dir;
  afford::CmdOptions opts;
};

void add_common(CLI::App* cmd, GlobalArgs& args) {
  cmd->add_option("--config", args.config_path, "Run configuration (JSON)")
      ->required();
  cmd->add_option("--output-dir", args.output_dir,
                  "Artifact directory (overrides config and "
                  "AFFORD_OUTPUT_DIR)");
  cmd->add_option("--threads", args.opts.threads,
                  "Worker cap for grid cells and regression dimensions")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--deterministic", args.opts.deterministic,
                "Single-threaded reference mode");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"noun-verb affordance modeling pipeline"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(afford::kVersion));

  GlobalArgs args;
  int rank_top = 10;
  std::string eval_method = "model";
  std::optional<std::string> eval_dataset;

  CLI::App* extract = app.add_subcommand(
      "extract", "Collect noun-verb counts from parsed corpora");
  CLI::App* ppmi = app.add_subcommand(
      "ppmi", "Turn counts into positive pointwise mutual information");
  CLI::App* cv = app.add_subcommand(
      "cv", "Select rank and sparsity by block hold-out cross-validation");
  CLI::App* factorize = app.add_subcommand(
      "factorize", "Fit the non-negative factorization at the chosen cell");
  CLI::App* rank =
      app.add_subcommand("rank", "Write per-object verb rankings");
  rank->add_option("--top", rank_top, "Verbs listed per object")
      ->check(CLI::PositiveNumber);
  CLI::App* eval =
      app.add_subcommand("eval", "Score rankings against ground-truth labels");
  eval->add_option("--method", eval_method,
                   "Ranker to evaluate: model, ppmi, or vectors");
  eval->add_option("--dataset", eval_dataset,
                   "Evaluate just this configured dataset");
  CLI::App* regress = app.add_subcommand(
      "regress", "Predict external object dimensions from the embedding");
  CLI::App* report = app.add_subcommand(
      "report", "Consolidate artifacts into summary tables");

  for (CLI::App* cmd :
       {extract, ppmi, cv, factorize, rank, eval, regress, report}) {
    add_common(cmd, args);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the message
    return 2;
  }

  try {
    const afford::RunConfig cfg =
        afford::RunConfig::load(args.config_path, args.output_dir);
    if (extract->parsed()) {
      afford::cmd_extract(cfg, args.opts, std::cout);
    } else if (ppmi->parsed()) {
      afford::cmd_ppmi(cfg, args.opts, std::cout);
    } else if (cv->parsed()) {
      afford::cmd_cv(cfg, args.opts, std::cout);
    } else if (factorize->parsed()) {
      afford::cmd_factorize(cfg, args.opts, std::cout);
    } else if (rank->parsed()) {
      afford::cmd_rank(cfg, args.opts, std::cout, rank_top);
    } else if (eval->parsed()) {
      afford::cmd_eval(cfg, args.opts, std::cout, eval_method, eval_dataset);
    } else if (regress->parsed()) {
      afford::cmd_regress(cfg, args.opts, std::cout);
    } else if (report->parsed()) {
      afford::cmd_report(cfg, args.opts, std::cout);
    }
  } catch (const afford::ConfigError& e) {
    std::cerr << "afford: config: " << e.what() << "\n";
    return 2;
  } catch (const afford::Error& e) {
    std::cerr << "afford: error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "afford: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
