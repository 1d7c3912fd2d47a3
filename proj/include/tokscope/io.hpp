// Copyright 2026 The tokscope Authors
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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tokscope/error.hpp"

namespace tokscope::io {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Write-temp-then-rename so partially written outputs never replace a
/// previous artifact.
inline void atomic_write(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write file: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw DataError("short write: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline std::vector<std::string> split(std::string_view s, char delim) {
  std::vector<std::string> parts;
  size_t start = 0;
  while (true) {
    size_t pos = s.find(delim, start);
    if (pos == std::string_view::npos) {
      parts.emplace_back(s.substr(start));
      break;
    }
    parts.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return parts;
}

/// Splits file content into lines; tolerates a missing trailing newline
/// and strips a trailing '\r' per line.
inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::string content = read_file(path);
  std::vector<std::string> lines;
  size_t start = 0;
  while (start <= content.size()) {
    size_t pos = content.find('\n', start);
    if (pos == std::string::npos) {
      if (start < content.size()) lines.emplace_back(content.substr(start));
      break;
    }
    std::string line = content.substr(start, pos - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = pos + 1;
  }
  return lines;
}

}  // namespace tokscope::io
