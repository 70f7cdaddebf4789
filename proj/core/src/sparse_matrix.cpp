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

#include "afford/sparse_matrix.hpp"

#include <cstdlib>
#include <set>
#include <utility>
#include <vector>

#include "afford/error.hpp"
#include "afford/io.hpp"

namespace afford {

void LabeledMatrix::save(const std::filesystem::path& path,
                         const std::string& config_hash) const {
  io::atomic_write(path, [&](std::ostream& out) {
    out << "#rows=" << rows.size() << " cols=" << cols.size() << "\n";
    if (!config_hash.empty()) out << "#config=" << config_hash << "\n";
    for (int i = 0; i < values.outerSize(); ++i) {
      for (SparseMat::InnerIterator it(values, i); it; ++it) {
        out << rows.at(static_cast<int>(it.row())) << '\t'
            << cols.at(static_cast<int>(it.col())) << '\t'
            << io::format_double(it.value()) << '\n';
      }
    }
  });
}

LabeledMatrix LabeledMatrix::load(const std::filesystem::path& path,
                                  VocabIndex row_vocab, VocabIndex col_vocab) {
  const auto lines = io::read_lines(path);
  if (lines.empty()) throw Error("empty matrix file: " + path.string());

  int m = 0, n = 0;
  if (std::sscanf(lines[0].c_str(), "#rows=%d cols=%d", &m, &n) != 2) {
    throw Error(path.string() + ":1: expected '#rows=<m> cols=<n>' header");
  }
  if (m != row_vocab.size() || n != col_vocab.size()) {
    throw Error(path.string() + ": header says " + std::to_string(m) + "x" +
                std::to_string(n) + " but vocabularies are " +
                std::to_string(row_vocab.size()) + "x" +
                std::to_string(col_vocab.size()));
  }

  std::vector<Eigen::Triplet<double>> triplets;
  std::set<std::pair<int, int>> seen;
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    const std::string& line = lines[ln];
    if (line.empty() || line.front() == '#') continue;
    const auto fields = io::split_tabs(line);
    if (fields.size() != 3) {
      throw Error(path.string() + ":" + std::to_string(ln + 1) +
                  ": expected 3 tab-separated fields");
    }
    const auto ri = row_vocab.find(fields[0]);
    if (!ri) {
      throw Error(path.string() + ":" + std::to_string(ln + 1) +
                  ": row label not in vocabulary: " + fields[0]);
    }
    const auto ci = col_vocab.find(fields[1]);
    if (!ci) {
      throw Error(path.string() + ":" + std::to_string(ln + 1) +
                  ": column label not in vocabulary: " + fields[1]);
    }
    char* end = nullptr;
    const double v = std::strtod(fields[2].c_str(), &end);
    if (end != fields[2].c_str() + fields[2].size()) {
      throw Error(path.string() + ":" + std::to_string(ln + 1) +
                  ": value is not a number: " + fields[2]);
    }
    if (!seen.insert({*ri, *ci}).second) {
      throw Error(path.string() + ":" + std::to_string(ln + 1) +
                  ": duplicate cell " + fields[0] + "/" + fields[1]);
    }
    triplets.emplace_back(*ri, *ci, v);
  }

  LabeledMatrix out{std::move(row_vocab), std::move(col_vocab), SparseMat(m, n)};
  out.values.setFromTriplets(triplets.begin(), triplets.end());
  out.values.makeCompressed();
  return out;
}

}  // namespace afford
