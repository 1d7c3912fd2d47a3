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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tokscope/error.hpp"
#include "tokscope/unicode.hpp"
#include "tokscope/utf8.hpp"

namespace tokscope {

/// Word-start marker used by the sentencepiece-style profile (U+2581).
inline constexpr uint32_t kWordMarkerCp = 0x2581;
inline constexpr std::string_view kWordMarker = "\xE2\x96\x81";

/// Byte-level alphabet: a bijection byte -> printable codepoint.
/// Printable latin-1 bytes map to themselves, everything else to
/// 0x100 + running index, so e.g. the space byte 0x20 maps to U+0120.
inline const std::array<uint32_t, 256>& byte_to_char_table() {
  static const std::array<uint32_t, 256> table = [] {
    std::array<uint32_t, 256> t{};
    auto printable = [](int b) {
      return (b >= 0x21 && b <= 0x7E) || (b >= 0xA1 && b <= 0xAC) || (b >= 0xAE && b <= 0xFF);
    };
    uint32_t next = 0x100;
    for (int b = 0; b < 256; ++b) t[b] = printable(b) ? uint32_t(b) : next++;
    return t;
  }();
  return table;
}

inline const std::unordered_map<uint32_t, uint8_t>& char_to_byte_table() {
  static const std::unordered_map<uint32_t, uint8_t> table = [] {
    std::unordered_map<uint32_t, uint8_t> t;
    const auto& fwd = byte_to_char_table();
    for (int b = 0; b < 256; ++b) t.emplace(fwd[b], static_cast<uint8_t>(b));
    return t;
  }();
  return table;
}

/// Maps raw bytes into the byte-level alphabet (UTF-8 of mapped chars).
inline std::string bytes_to_byte_level(std::string_view bytes) {
  std::string out;
  out.reserve(bytes.size() * 2);
  const auto& table = byte_to_char_table();
  for (char c : bytes) utf8::append(table[static_cast<uint8_t>(c)], out);
  return out;
}

/// Inverse of bytes_to_byte_level. Throws on codepoints outside the
/// alphabet (token strings of a byte-level model never contain any).
inline std::string byte_level_to_bytes(std::string_view mapped) {
  std::string out;
  out.reserve(mapped.size());
  const auto& table = char_to_byte_table();
  size_t i = 0;
  uint32_t cp;
  while (i < mapped.size()) {
    if (!utf8::next(mapped, i, cp)) throw DataError("malformed byte-level token string");
    auto it = table.find(cp);
    if (it == table.end()) throw DataError("codepoint outside byte-level alphabet");
    out.push_back(static_cast<char>(it->second));
  }
  return out;
}

/// The default special-token list: sentence delimiters, pad, end of
/// document, and 255 reserved placeholder slots. Specials occupy the
/// lowest ids and never take part in training or metric counts.
inline std::vector<std::string> default_specials() {
  std::vector<std::string> s = {"<s>", "</s>", "<pad>", "<eod>"};
  s.reserve(4 + 255);
  for (int i = 1; i <= 255; ++i) s.push_back("<ph_" + std::to_string(i) + ">");
  return s;
}

enum class ProfileKind : uint8_t { kSentencePiece, kHuggingface };

inline constexpr std::string_view to_string(ProfileKind k) {
  return k == ProfileKind::kSentencePiece ? "sp" : "hf";
}

/// Normalization / pre-tokenization options of a tokenizer. The two
/// named constructors are the option sets the library ships with; all
/// fields stay configurable.
struct Profile {
  ProfileKind kind = ProfileKind::kSentencePiece;
  bool strip_accents = false;
  bool lowercase = false;
  bool dummy_prefix = false;      // prepend a word marker to the text
  bool digit_split = true;        // split decimal-digit runs from neighbours
  bool byte_level_pretok = false; // map pre-tokens into the byte alphabet
  bool byte_fallback = false;     // encode unknown characters as raw-byte tokens
  std::optional<uint32_t> limit_alphabet;
  std::vector<std::string> specials = default_specials();

  static Profile sentencepiece() {
    Profile p;
    p.kind = ProfileKind::kSentencePiece;
    p.dummy_prefix = true;
    p.byte_fallback = true;
    return p;
  }

  static Profile huggingface() {
    Profile p;
    p.kind = ProfileKind::kHuggingface;
    p.strip_accents = true;
    p.byte_level_pretok = true;
    p.limit_alphabet = 512;
    return p;
  }

  /// Exactly one of the two coverage strategies must be active or
  /// encode would not be total.
  void validate() const {
    if (byte_level_pretok == byte_fallback)
      throw UsageError("profile: exactly one of byte_level_pretok / byte_fallback required");
  }

  friend bool operator==(const Profile&, const Profile&) = default;
};

/// Profile-dependent text normalization: NFKC, optionally with
/// accent stripping and lowercasing. Idempotent.
inline std::string normalize(std::string_view text, const Profile& profile) {
  std::string out =
      profile.strip_accents ? uni::nfkc_strip_accents(text) : uni::nfkc(text);
  if (profile.lowercase) {
    std::string lowered;
    lowered.reserve(out.size());
    size_t i = 0;
    uint32_t cp;
    while (i < out.size()) {
      if (!utf8::next(out, i, cp)) {
        ++i;
        continue;
      }
      utf8::append(static_cast<uint32_t>(u_tolower(static_cast<UChar32>(cp))), lowered);
    }
    out = std::move(lowered);
  }
  return out;
}

}  // namespace tokscope
