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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <memory>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace afford::io {

/// Opens a text file for reading; transparently inflates if the path ends
/// in ".gz". Throws afford::Error when the file cannot be opened.
std::unique_ptr<std::istream> open_input(const std::filesystem::path& path);

/// Writes via a temporary file in the destination directory and renames it
/// into place, so readers never observe a partial artifact.
void atomic_write(const std::filesystem::path& path,
                  const std::function<void(std::ostream&)>& writer);

/// Shortest round-trip-safe decimal form (%.12g) used in every TSV artifact.
std::string format_double(double v);

/// FNV-1a 64-bit over a string; stable across platforms, used to stamp
/// artifacts with the configuration they were produced under.
std::uint64_t fnv1a(std::string_view s);

/// Hash rendered the way artifacts embed it (16 hex digits).
std::string hash_hex(std::uint64_t h);

/// Reads all lines from a (possibly gzipped) text file, stripping one
/// trailing '\r' so CRLF inputs behave like LF.
std::vector<std::string> read_lines(const std::filesystem::path& path);

/// Splits on single tab characters; empty fields are preserved.
std::vector<std::string> split_tabs(const std::string& line);

}  // namespace afford::io
