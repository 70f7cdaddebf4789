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

#include "afford/conllu.hpp"

#include <charconv>

#include "afford/error.hpp"
#include "afford/io.hpp"

namespace afford {
namespace {

bool parse_int(const std::string& s, int& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

// ID fields like "3-4" (multiword token) or "3.1" (empty node) introduce
// rows that carry no dependency structure of their own.
bool is_subtoken_row(const std::string& id_field) {
  return id_field.find('-') != std::string::npos ||
         id_field.find('.') != std::string::npos;
}

}  // namespace

const Token* Sentence::by_id(int id) const {
  if (id >= 1 && id <= static_cast<int>(tokens.size()) &&
      tokens[id - 1].id == id) {
    return &tokens[id - 1];
  }
  for (const auto& t : tokens) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

ConlluReader::ConlluReader(const std::filesystem::path& path)
    : in_(io::open_input(path)), path_(path.string()) {}

bool ConlluReader::next(Sentence& out) {
  out.tokens.clear();
  std::string line;
  bool saw_token = false;
  while (std::getline(*in_, line)) {
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      if (saw_token) {
        ++sentences_read_;
        return true;
      }
      continue;  // stray blank line between sentences
    }
    if (line.front() == '#') continue;
    const auto fields = io::split_tabs(line);
    if (fields.size() != 10) {
      throw Error(path_ + ":" + std::to_string(line_no_) +
                  ": expected 10 tab-separated fields, got " +
                  std::to_string(fields.size()));
    }
    if (is_subtoken_row(fields[0])) continue;
    Token t;
    if (!parse_int(fields[0], t.id)) {
      throw Error(path_ + ":" + std::to_string(line_no_) +
                  ": token id is not an integer: " + fields[0]);
    }
    t.form = fields[1];
    t.lemma = fields[2];
    t.upos = fields[3];
    if (!parse_int(fields[6], t.head)) {
      throw Error(path_ + ":" + std::to_string(line_no_) +
                  ": HEAD is not an integer: " + fields[6]);
    }
    t.deprel = fields[7];
    out.tokens.push_back(std::move(t));
    saw_token = true;
  }
  if (saw_token) {
    ++sentences_read_;
    return true;
  }
  return false;
}

std::vector<Sentence> read_conllu(const std::filesystem::path& path) {
  ConlluReader reader(path);
  std::vector<Sentence> sentences;
  Sentence s;
  while (reader.next(s)) sentences.push_back(s);
  return sentences;
}

}  // namespace afford
