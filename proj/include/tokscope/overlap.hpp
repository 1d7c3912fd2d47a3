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

#include <algorithm>
#include <string>
#include <unordered_set>

#include "tokscope/model.hpp"
#include "tokscope/utf8.hpp"

namespace tokscope {

/// Canonical byte string of a learned token, marker conventions
/// unified: word markers become literal spaces, byte-level alphabet
/// characters become their bytes, raw-byte tokens become the byte.
/// "▁hello" and "Ġhello"-style tokens both canonicalize to " hello".
inline std::string canonical_token(const TokenizerModel& model, const std::string& token) {
  if (auto b = parse_byte_token(token); b && model.profile.byte_fallback)
    return std::string(1, static_cast<char>(*b));
  if (model.profile.byte_level_pretok) return byte_level_to_bytes(token);
  std::string out;
  out.reserve(token.size());
  size_t i = 0;
  uint32_t cp;
  while (i < token.size()) {
    if (!utf8::next(token, i, cp)) {
      out.push_back(token[i]);
      ++i;
      continue;
    }
    if (cp == kWordMarkerCp)
      out.push_back(' ');
    else
      utf8::append(cp, out);
  }
  return out;
}

/// Learned-vocabulary token set in canonical form; specials excluded.
inline std::unordered_set<std::string> canonical_vocab(const TokenizerModel& model) {
  std::unordered_set<std::string> out;
  out.reserve(model.vocab.size() * 2);
  for (size_t i = 0; i < model.vocab.size(); ++i) {
    if (model.is_special[i]) continue;
    out.insert(canonical_token(model, model.vocab[i]));
  }
  return out;
}

/// |A ∩ B| / min(|A|, |B|) over canonical learned-token sets.
/// Symmetric, in [0,1], and marker-convention agnostic.
inline double vocab_overlap(const TokenizerModel& a, const TokenizerModel& b) {
  const auto va = canonical_vocab(a);
  const auto vb = canonical_vocab(b);
  if (va.empty() || vb.empty()) return 0.0;
  const auto& small = va.size() <= vb.size() ? va : vb;
  const auto& large = va.size() <= vb.size() ? vb : va;
  size_t inter = 0;
  for (const auto& token : small)
    if (large.count(token)) ++inter;
  return static_cast<double>(inter) / static_cast<double>(small.size());
}

}  // namespace tokscope
