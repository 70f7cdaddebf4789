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

#include "afford/io.hpp"

#include <unistd.h>
#include <zlib.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <streambuf>
#include <system_error>

#include "afford/error.hpp"

namespace afford::io {
namespace {

// Pull-style streambuf over gzread. gzFile already handles plain files, so
// one code path serves both compressed and uncompressed inputs.
class GzStreambuf : public std::streambuf {
 public:
  explicit GzStreambuf(const std::filesystem::path& path)
      : file_(gzopen(path.string().c_str(), "rb")) {
    if (file_ == nullptr) {
      throw Error("cannot open input file: " + path.string());
    }
    setg(buf_.data(), buf_.data(), buf_.data());
  }

  ~GzStreambuf() override {
    if (file_ != nullptr) gzclose(file_);
  }

  GzStreambuf(const GzStreambuf&) = delete;
  GzStreambuf& operator=(const GzStreambuf&) = delete;

 protected:
  int_type underflow() override {
    if (gptr() < egptr()) return traits_type::to_int_type(*gptr());
    const int n = gzread(file_, buf_.data(), static_cast<unsigned>(buf_.size()));
    if (n < 0) throw Error("error while reading compressed stream");
    if (n == 0) return traits_type::eof();
    setg(buf_.data(), buf_.data(), buf_.data() + n);
    return traits_type::to_int_type(*gptr());
  }

 private:
  gzFile file_;
  std::array<char, 1 << 16> buf_{};
};

class GzInputStream : public std::istream {
 public:
  explicit GzInputStream(const std::filesystem::path& path)
      : std::istream(nullptr), buf_(path) {
    rdbuf(&buf_);
  }

 private:
  GzStreambuf buf_;
};

}  // namespace

std::unique_ptr<std::istream> open_input(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw Error("input file does not exist: " + path.string());
  }
  return std::make_unique<GzInputStream>(path);
}

void atomic_write(const std::filesystem::path& path,
                  const std::function<void(std::ostream&)>& writer) {
  const auto dir = path.parent_path().empty() ? std::filesystem::path(".")
                                              : path.parent_path();
  std::filesystem::create_directories(dir);
  const auto tmp = dir / (path.filename().string() + ".tmp." +
                          std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open file for writing: " + tmp.string());
    writer(out);
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw Error("write failed: " + path.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cannot move temporary file into place: " + path.string());
  }
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const int n = std::snprintf(buf.data(), buf.size(), "%.12g", v);
  return std::string(buf.data(), static_cast<std::size_t>(n));
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  std::array<char, 17> buf{};
  std::snprintf(buf.data(), buf.size(), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf.data(), 16);
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(*in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

}  // namespace afford::io
