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

#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "afford/config.hpp"

namespace afford {

/// Flags shared by every pipeline command. `deterministic` pins the worker
/// count to one; with more workers results still match bit for bit because
/// parallel units write to preallocated slots, but single-threaded runs are
/// the reference.
struct CmdOptions {
  int threads = 1;
  bool deterministic = false;

  int effective_threads() const { return deterministic ? 1 : threads; }
};

/// Each command reads its inputs (vocabularies, corpus, or an upstream
/// artifact in the output directory), writes its artifacts atomically with
/// the config hash embedded, and logs one line per artifact to `log`.

void cmd_extract(const RunConfig& cfg, const CmdOptions& opts,
                 std::ostream& log);
void cmd_ppmi(const RunConfig& cfg, const CmdOptions& opts, std::ostream& log);
void cmd_cv(const RunConfig& cfg, const CmdOptions& opts, std::ostream& log);
void cmd_factorize(const RunConfig& cfg, const CmdOptions& opts,
                   std::ostream& log);
void cmd_rank(const RunConfig& cfg, const CmdOptions& opts, std::ostream& log,
              int top_verbs = 10);
void cmd_eval(const RunConfig& cfg, const CmdOptions& opts, std::ostream& log,
              const std::string& method = "model",
              const std::optional<std::string>& dataset_filter = std::nullopt);
void cmd_regress(const RunConfig& cfg, const CmdOptions& opts,
                 std::ostream& log);
void cmd_report(const RunConfig& cfg, const CmdOptions& opts,
                std::ostream& log);

}  // namespace afford
