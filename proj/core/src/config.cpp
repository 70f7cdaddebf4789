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

#include "afford/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>

#include <nlohmann/json.hpp>

#include "afford/error.hpp"
#include "afford/io.hpp"
#include "afford/version.hpp"

namespace afford {
namespace {

// Matches '*' wildcards against a filename, no directory recursion.
bool wildcard_match(const std::string& pattern, const std::string& name) {
  std::size_t p = 0, s = 0, star = std::string::npos, mark = 0;
  while (s < name.size()) {
    if (p < pattern.size() &&
        (pattern[p] == name[s] || pattern[p] == '?')) {
      ++p;
      ++s;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      mark = s;
    } else if (star != std::string::npos) {
      p = star + 1;
      s = ++mark;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::filesystem::path& p) {
  return p.is_absolute() ? p : base / p;
}

void require_exists(const std::filesystem::path& p, const char* what) {
  if (!std::filesystem::exists(p)) {
    throw ConfigError(std::string(what) + " path does not exist: " +
                      p.string());
  }
}

}  // namespace

std::vector<std::filesystem::path> expand_glob(
    const std::filesystem::path& pattern) {
  const std::string name = pattern.filename().string();
  if (name.find('*') == std::string::npos &&
      name.find('?') == std::string::npos) {
    return {pattern};
  }
  const auto dir =
      pattern.parent_path().empty() ? std::filesystem::path(".")
                                    : pattern.parent_path();
  if (!std::filesystem::is_directory(dir)) {
    throw ConfigError("glob directory does not exist: " + dir.string());
  }
  std::vector<std::filesystem::path> matches;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() &&
        wildcard_match(name, entry.path().filename().string())) {
      matches.push_back(entry.path());
    }
  }
  if (matches.empty()) {
    throw ConfigError("corpus pattern matches no files: " + pattern.string());
  }
  std::sort(matches.begin(), matches.end());
  return matches;
}

RunConfig RunConfig::load(
    const std::filesystem::path& path,
    const std::optional<std::string>& output_dir_override) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": invalid JSON: " + e.what());
  }

  RunConfig cfg;
  const auto base = std::filesystem::absolute(path).parent_path();
  try {
    if (!j.contains("seed") || !j["seed"].is_number_integer()) {
      throw ConfigError("config must set an explicit integer seed");
    }
    cfg.seed = j["seed"].get<std::uint64_t>();

    cfg.format_version = j.value("format_version", std::string(kFormatVersion));
    if (cfg.format_version != kFormatVersion) {
      throw ConfigError("unsupported format_version '" + cfg.format_version +
                        "' (this build writes '" + kFormatVersion + "')");
    }

    if (!j.contains("nouns") || !j.contains("verbs")) {
      throw ConfigError("config must name 'nouns' and 'verbs' vocabulary files");
    }
    cfg.nouns = resolve(base, j["nouns"].get<std::string>());
    cfg.verbs = resolve(base, j["verbs"].get<std::string>());
    require_exists(cfg.nouns, "noun vocabulary");
    require_exists(cfg.verbs, "verb vocabulary");

    if (j.contains("corpus")) {
      std::vector<std::string> patterns;
      if (j["corpus"].is_string()) {
        patterns.push_back(j["corpus"].get<std::string>());
      } else {
        patterns = j["corpus"].get<std::vector<std::string>>();
      }
      for (const auto& pat : patterns) {
        for (auto& p : expand_glob(resolve(base, pat))) {
          require_exists(p, "corpus");
          cfg.corpus.push_back(std::move(p));
        }
      }
    }

    if (j.contains("nmf")) {
      const auto& nj = j["nmf"];
      if (nj.contains("d")) cfg.nmf.d = nj["d"].get<int>();
      if (nj.contains("beta")) cfg.nmf.beta = nj["beta"].get<double>();
      if (nj.contains("d_list"))
        cfg.nmf.d_list = nj["d_list"].get<std::vector<int>>();
      if (nj.contains("beta_list"))
        cfg.nmf.beta_list = nj["beta_list"].get<std::vector<double>>();
      cfg.nmf.K = nj.value("K", cfg.nmf.K);
      cfg.nmf.q = nj.value("q", cfg.nmf.q);
      cfg.nmf.restarts = nj.value("restarts", cfg.nmf.restarts);
      cfg.nmf.max_iter = nj.value("max_iter", cfg.nmf.max_iter);
      cfg.nmf.tol = nj.value("tol", cfg.nmf.tol);
      if (cfg.nmf.K < 2 || cfg.nmf.q < 1 || cfg.nmf.q >= cfg.nmf.K) {
        throw ConfigError("nmf hold-out parameters need K >= 2 and 1 <= q < K");
      }
      if (cfg.nmf.restarts < 1 || cfg.nmf.max_iter < 1 ||
          !(cfg.nmf.tol > 0.0)) {
        throw ConfigError("nmf needs restarts >= 1, max_iter >= 1, tol > 0");
      }
      if (cfg.nmf.d && *cfg.nmf.d < 1) {
        throw ConfigError("nmf d must be a positive integer");
      }
      if (cfg.nmf.beta && *cfg.nmf.beta < 0.0) {
        throw ConfigError("nmf beta must be >= 0");
      }
    }

    if (j.contains("regression")) {
      const auto& rj = j["regression"];
      cfg.regression.grid_points =
          rj.value("grid_points", cfg.regression.grid_points);
      cfg.regression.folds = rj.value("folds", cfg.regression.folds);
      if (rj.contains("seed"))
        cfg.regression.seed = rj["seed"].get<std::uint64_t>();
      cfg.regression.top_verbs =
          rj.value("top_verbs", cfg.regression.top_verbs);
      if (rj.contains("targets")) {
        cfg.regression.targets = resolve(base, rj["targets"].get<std::string>());
        require_exists(cfg.regression.targets, "regression target");
      }
      if (cfg.regression.grid_points < 1 || cfg.regression.folds < 2 ||
          cfg.regression.top_verbs < 0) {
        throw ConfigError(
            "regression needs grid_points >= 1, folds >= 2, top_verbs >= 0");
      }
    }

    if (j.contains("datasets")) {
      for (const auto& dj : j["datasets"]) {
        EvalDataset ds;
        ds.name = dj.at("name").get<std::string>();
        ds.truth = resolve(base, dj.at("truth").get<std::string>());
        ds.cutoff = dj.value("cutoff", ds.cutoff);
        require_exists(ds.truth, "truth table");
        if (ds.name.empty()) throw ConfigError("dataset name must be non-empty");
        cfg.datasets.push_back(std::move(ds));
      }
    }

    if (j.contains("vectors")) {
      cfg.vectors = resolve(base, j["vectors"].get<std::string>());
      require_exists(cfg.vectors, "word vector");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }

  // The hash covers configuration content, not where outputs land.
  nlohmann::json hashed = j;
  hashed.erase("output_dir");
  cfg.config_hash = io::hash_hex(io::fnv1a(hashed.dump()));

  if (output_dir_override) {
    cfg.output_dir = *output_dir_override;
  } else if (const char* env = std::getenv("AFFORD_OUTPUT_DIR")) {
    cfg.output_dir = env;
  } else if (j.contains("output_dir")) {
    cfg.output_dir = resolve(base, j["output_dir"].get<std::string>());
  } else {
    cfg.output_dir = "afford_out";
  }
  return cfg;
}

}  // namespace afford
