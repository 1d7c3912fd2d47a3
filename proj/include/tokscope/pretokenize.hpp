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

#include <string>
#include <string_view>
#include <vector>

#include "tokscope/profile.hpp"
#include "tokscope/unicode.hpp"
#include "tokscope/utf8.hpp"

namespace tokscope {

/// One pre-tokenization unit. Trained pieces never span pre-token
/// boundaries, which is what keeps tokens inside word boundaries.
struct PreToken {
  std::string text;
  // A literal word-marker character in the input would collide with the
  // marker convention; such pre-tokens bypass the vocabulary and are
  // encoded as raw bytes.
  bool force_bytes = false;

  friend bool operator==(const PreToken&, const PreToken&) = default;
};

namespace detail {

enum class CharClass { kMarker, kRawMarker, kWhitespace, kDigit, kWord };

inline CharClass classify_sp(uint32_t cp, bool digit_split) {
  if (cp == 0x20) return CharClass::kMarker;
  if (cp == kWordMarkerCp) return CharClass::kRawMarker;
  if (uni::is_whitespace(cp)) return CharClass::kWhitespace;
  if (digit_split && uni::is_decimal_digit(cp)) return CharClass::kDigit;
  return CharClass::kWord;
}

/// Spaces become word markers attached to the following word; other
/// whitespace and literal marker characters become standalone
/// pre-tokens so that decoding reproduces the input exactly.
inline std::vector<PreToken> pretokenize_sp(std::string_view text, const Profile& profile) {
  std::vector<uint32_t> cps = utf8::decode(text);
  if (cps.empty()) return {};

  std::vector<PreToken> out;
  std::string markers;  // pending run of word markers
  std::string current;  // current word/digit run, marker-prefixed
  CharClass current_class = CharClass::kMarker;

  auto flush_current = [&] {
    if (!current.empty()) out.push_back({std::move(current), false});
    current.clear();
  };
  auto flush_markers = [&] {
    if (!markers.empty()) out.push_back({std::move(markers), false});
    markers.clear();
  };

  auto feed = [&](uint32_t cp) {
    const CharClass cls = classify_sp(cp, profile.digit_split);
    switch (cls) {
      case CharClass::kMarker:
        flush_current();
        markers += kWordMarker;
        break;
      case CharClass::kRawMarker:
        flush_current();
        flush_markers();
        out.push_back({std::string(kWordMarker), true});
        break;
      case CharClass::kWhitespace:
        flush_current();
        flush_markers();
        out.push_back({utf8::encode(cp), false});
        break;
      case CharClass::kDigit:
      case CharClass::kWord:
        if (!current.empty() && current_class != cls) flush_current();
        if (current.empty() && !markers.empty()) current = std::move(markers), markers.clear();
        utf8::append(cp, current);
        current_class = cls;
        break;
    }
  };

  if (profile.dummy_prefix) feed(0x20);
  for (uint32_t cp : cps) feed(cp);
  flush_current();
  flush_markers();
  return out;
}

/// Maximal same-class runs (word / digit / whitespace), each mapped
/// into the byte-level alphabet. Whitespace runs are retained as their
/// own pre-tokens: the mapping is bijective on bytes, so decode is the
/// exact inverse.
inline std::vector<PreToken> pretokenize_hf(std::string_view text, const Profile& profile) {
  std::vector<PreToken> out;
  std::string run;
  int run_class = -1;  // 0 ws, 1 digit, 2 word
  auto flush = [&] {
    if (!run.empty()) out.push_back({bytes_to_byte_level(run), false});
    run.clear();
  };
  size_t i = 0;
  uint32_t cp;
  while (i < text.size()) {
    const size_t start = i;
    if (!utf8::next(text, i, cp)) {
      ++i;
      cp = 0xFFFD;
    }
    int cls = uni::is_whitespace(cp)                            ? 0
              : (profile.digit_split && uni::is_decimal_digit(cp)) ? 1
                                                                   : 2;
    if (cls != run_class) flush();
    run_class = cls;
    run.append(text.substr(start, i - start));
  }
  flush();
  return out;
}

}  // namespace detail

/// Splits normalized text into pre-tokens per the profile's rules.
inline std::vector<PreToken> pretokenize(std::string_view text, const Profile& profile) {
  if (text.empty()) return {};
  return profile.byte_level_pretok ? detail::pretokenize_hf(text, profile)
                                   : detail::pretokenize_sp(text, profile);
}

}  // namespace tokscope
