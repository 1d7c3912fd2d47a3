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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tokscope::utf8 {

/// Appends the UTF-8 encoding of one codepoint to `out`.
inline void append(uint32_t cp, std::string& out) {
  if (cp <= 0x7F) {
    out.push_back(static_cast<char>(cp));
  } else if (cp <= 0x7FF) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp <= 0xFFFF) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

inline std::string encode(uint32_t cp) {
  std::string s;
  append(cp, s);
  return s;
}

inline std::string encode(const std::vector<uint32_t>& cps) {
  std::string s;
  s.reserve(cps.size());
  for (uint32_t cp : cps) append(cp, s);
  return s;
}

/// Decodes the codepoint starting at byte offset `i`, advancing `i`.
/// Returns false on malformed input (overlong forms, surrogates,
/// truncated sequences, out-of-range codepoints) without advancing past
/// the offending byte.
inline bool next(std::string_view s, size_t& i, uint32_t& cp) {
  if (i >= s.size()) return false;
  const auto b0 = static_cast<uint8_t>(s[i]);
  if (b0 < 0x80) {
    cp = b0;
    i += 1;
    return true;
  }
  auto cont = [&](size_t k) {
    return i + k < s.size() && (static_cast<uint8_t>(s[i + k]) & 0xC0) == 0x80;
  };
  if ((b0 & 0xE0) == 0xC0) {
    if (!cont(1)) return false;
    cp = (uint32_t(b0 & 0x1F) << 6) | (static_cast<uint8_t>(s[i + 1]) & 0x3F);
    if (cp < 0x80) return false;
    i += 2;
    return true;
  }
  if ((b0 & 0xF0) == 0xE0) {
    if (!cont(1) || !cont(2)) return false;
    cp = (uint32_t(b0 & 0x0F) << 12) |
         (uint32_t(static_cast<uint8_t>(s[i + 1]) & 0x3F) << 6) |
         (static_cast<uint8_t>(s[i + 2]) & 0x3F);
    if (cp < 0x800 || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
    i += 3;
    return true;
  }
  if ((b0 & 0xF8) == 0xF0) {
    if (!cont(1) || !cont(2) || !cont(3)) return false;
    cp = (uint32_t(b0 & 0x07) << 18) |
         (uint32_t(static_cast<uint8_t>(s[i + 1]) & 0x3F) << 12) |
         (uint32_t(static_cast<uint8_t>(s[i + 2]) & 0x3F) << 6) |
         (static_cast<uint8_t>(s[i + 3]) & 0x3F);
    if (cp < 0x10000 || cp > 0x10FFFF) return false;
    i += 4;
    return true;
  }
  return false;
}

inline bool valid(std::string_view s) {
  size_t i = 0;
  uint32_t cp;
  while (i < s.size()) {
    if (!next(s, i, cp)) return false;
  }
  return true;
}

inline std::vector<uint32_t> decode(std::string_view s) {
  std::vector<uint32_t> cps;
  cps.reserve(s.size());
  size_t i = 0;
  uint32_t cp;
  while (i < s.size()) {
    if (!next(s, i, cp)) {
      cps.push_back(0xFFFD);
      ++i;
      continue;
    }
    cps.push_back(cp);
  }
  return cps;
}

}  // namespace tokscope::utf8
