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
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tokscope/model.hpp"
#include "tokscope/pretokenize.hpp"
#include "tokscope/profile.hpp"
#include "tokscope/unicode.hpp"
#include "tokscope/utf8.hpp"

namespace tokscope {

namespace detail {

/// Merge ranks keyed by (left_id, right_id) pairs; rebuilt per encoder.
struct MergeIndex {
  std::unordered_map<uint64_t, std::pair<int32_t, int32_t>> rank_and_out;

  static uint64_t key(int32_t l, int32_t r) {
    return (uint64_t(uint32_t(l)) << 32) | uint64_t(uint32_t(r));
  }

  explicit MergeIndex(const TokenizerModel& model) {
    rank_and_out.reserve(model.merges.size() * 2);
    for (size_t rank = 0; rank < model.merges.size(); ++rank) {
      const auto& [l, r] = model.merges[rank];
      const int32_t lid = model.id_of(l), rid = model.id_of(r);
      const int32_t oid = model.id_of(l + r);
      rank_and_out.emplace(key(lid, rid), std::pair{int32_t(rank), oid});
    }
  }
};

}  // namespace detail

/// Stateful encoding session over an immutable model. Caches the id
/// sequence per distinct pre-token, which is where natural-language
/// corpora spend nearly all their encode time. Not thread-safe; create
/// one session per thread.
class Encoder {
 public:
  explicit Encoder(const TokenizerModel& model) : model_(model), merges_(model) {}

  const TokenizerModel& model() const { return model_; }

  /// Encodes raw text: normalize, pre-tokenize, then per-pre-token
  /// subword segmentation. Total: any input yields a valid id sequence.
  std::vector<int32_t> encode(std::string_view text) {
    std::vector<int32_t> ids;
    const std::string norm = normalize(text, model_.profile);
    for (const auto& pre : pretokenize(norm, model_.profile)) encode_pretoken(pre, ids);
    return ids;
  }

  /// Encodes already-normalized text (skips the normalization pass).
  std::vector<int32_t> encode_normalized(std::string_view norm) {
    std::vector<int32_t> ids;
    for (const auto& pre : pretokenize(norm, model_.profile)) encode_pretoken(pre, ids);
    return ids;
  }

  void encode_pretoken(const PreToken& pre, std::vector<int32_t>& out) {
    if (pre.force_bytes) {
      append_bytes(pre.text, out);
      return;
    }
    auto it = cache_.find(pre.text);
    if (it == cache_.end()) {
      std::vector<int32_t> ids;
      if (model_.algorithm == Algorithm::kBpe)
        bpe_segment(pre.text, ids);
      else
        viterbi_segment(pre.text, ids);
      it = cache_.emplace(pre.text, std::move(ids)).first;
    }
    out.insert(out.end(), it->second.begin(), it->second.end());
  }

 private:
  void append_bytes(std::string_view bytes, std::vector<int32_t>& out) const {
    if (model_.byte_token_ids.empty())
      throw DataError("model cannot represent character: no byte fallback");
    for (char c : bytes) {
      const int32_t id = model_.byte_token_ids[static_cast<uint8_t>(c)];
      out.push_back(id);
    }
  }

  /// Initial symbol sequence for one pre-token: single characters when
  /// they exist in the vocabulary, raw-byte tokens otherwise.
  void base_symbols(std::string_view text, std::vector<int32_t>& symbols) const {
    size_t i = 0;
    uint32_t cp;
    std::string buf;
    while (i < text.size()) {
      const size_t start = i;
      if (!utf8::next(text, i, cp)) ++i;
      buf.assign(text.substr(start, i - start));
      const int32_t id = model_.id_of(buf);
      if (id >= 0 && !model_.is_special[id]) {
        symbols.push_back(id);
      } else {
        if (model_.byte_token_ids.empty())
          throw DataError("model cannot represent character: no byte fallback");
        for (char c : buf) symbols.push_back(model_.byte_token_ids[static_cast<uint8_t>(c)]);
      }
    }
  }

  /// Applies merges in rank order: repeatedly replace the adjacent pair
  /// with the lowest rank (leftmost occurrence on ties).
  void bpe_segment(std::string_view text, std::vector<int32_t>& out) const {
    std::vector<int32_t> symbols;
    base_symbols(text, symbols);
    while (symbols.size() > 1) {
      int32_t best_rank = std::numeric_limits<int32_t>::max();
      size_t best_pos = 0;
      int32_t best_out = -1;
      for (size_t i = 0; i + 1 < symbols.size(); ++i) {
        auto it = merges_.rank_and_out.find(detail::MergeIndex::key(symbols[i], symbols[i + 1]));
        if (it != merges_.rank_and_out.end() && it->second.first < best_rank) {
          best_rank = it->second.first;
          best_pos = i;
          best_out = it->second.second;
        }
      }
      if (best_out < 0) break;
      symbols[best_pos] = best_out;
      symbols.erase(symbols.begin() + static_cast<ptrdiff_t>(best_pos) + 1);
    }
    out.insert(out.end(), symbols.begin(), symbols.end());
  }

  /// Max-log-probability segmentation over the piece vocabulary, with a
  /// per-character raw-byte edge so that segmentation never fails.
  void viterbi_segment(std::string_view text, std::vector<int32_t>& out) const {
    // codepoint boundaries
    std::vector<size_t> bounds;
    bounds.push_back(0);
    {
      size_t i = 0;
      uint32_t cp;
      while (i < text.size()) {
        if (!utf8::next(text, i, cp)) ++i;
        bounds.push_back(i);
      }
    }
    const size_t n = bounds.size() - 1;
    if (n == 0) return;

    constexpr double kNegInf = -std::numeric_limits<double>::infinity();
    struct Cell {
      double score = kNegInf;
      int32_t prev = -1;     // codepoint index the best piece starts at
      int32_t token = -1;    // single token id, or -1 for a byte edge
    };
    std::vector<Cell> dp(n + 1);
    dp[0].score = 0.0;

    std::string buf;
    for (size_t end = 1; end <= n; ++end) {
      const size_t max_len = std::min(model_.max_piece_cps, end);
      for (size_t len = 1; len <= max_len; ++len) {
        const size_t start = end - len;
        if (dp[start].score == kNegInf) continue;
        buf.assign(text.substr(bounds[start], bounds[end] - bounds[start]));
        const int32_t id = model_.id_of(buf);
        if (id < 0 || model_.is_special[id] || parse_byte_token(model_.vocab[id])) continue;
        const double cand = dp[start].score + model_.logprobs[id];
        if (cand > dp[end].score) {
          dp[end] = {cand, static_cast<int32_t>(start), id};
        }
      }
      // raw-byte edge over one codepoint
      if (model_.profile.byte_fallback && dp[end - 1].score != kNegInf) {
        double cost = 0.0;
        for (size_t b = bounds[end - 1]; b < bounds[end]; ++b)
          cost += model_.logprobs[model_.byte_token_ids[static_cast<uint8_t>(text[b])]];
        const double cand = dp[end - 1].score + cost;
        if (cand > dp[end].score) dp[end] = {cand, static_cast<int32_t>(end - 1), -1};
      }
    }

    if (dp[n].score == kNegInf)
      throw DataError("model cannot segment pre-token: vocabulary lacks coverage");

    // walk back
    std::vector<int32_t> rev;
    size_t pos = n;
    while (pos > 0) {
      const Cell& cell = dp[pos];
      if (cell.token >= 0) {
        rev.push_back(cell.token);
      } else {
        for (size_t b = bounds[pos]; b-- > bounds[pos - 1];)
          rev.push_back(model_.byte_token_ids[static_cast<uint8_t>(text[b])]);
      }
      pos = static_cast<size_t>(cell.prev);
    }
    out.insert(out.end(), rev.rbegin(), rev.rend());
  }

  const TokenizerModel& model_;
  detail::MergeIndex merges_;
  std::unordered_map<std::string, std::vector<int32_t>> cache_;
};

inline std::vector<int32_t> encode(const TokenizerModel& model, std::string_view text) {
  Encoder session(model);
  return session.encode(text);
}

/// Inverse of encode up to normalization. Byte tokens contribute raw
/// bytes; sentencepiece-style pieces map the word marker back to a
/// space; byte-level pieces map alphabet characters back to bytes.
/// Special tokens decode to nothing.
inline std::string decode(const TokenizerModel& model, const std::vector<int32_t>& ids) {
  std::string out;
  for (int32_t id : ids) {
    if (id < 0 || static_cast<size_t>(id) >= model.vocab.size())
      throw UsageError("decode: token id out of range: " + std::to_string(id));
    if (model.is_special[id]) continue;
    const std::string& token = model.vocab[id];
    if (auto b = parse_byte_token(token); b && model.profile.byte_fallback) {
      out.push_back(static_cast<char>(*b));
      continue;
    }
    if (model.profile.byte_level_pretok) {
      out += byte_level_to_bytes(token);
      continue;
    }
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
  }
  if (model.profile.dummy_prefix && !out.empty() && out.front() == ' ') out.erase(out.begin());
  return out;
}

/// Whether a token participates in fertility/parity token counts.
/// Specials and pure word-marker/whitespace tokens are configuration,
/// not text, and are excluded so that fertility 1.0 is reachable and
/// counts are comparable across profiles.
inline bool counts_for_metrics(const TokenizerModel& model, int32_t id) {
  if (id < 0 || static_cast<size_t>(id) >= model.vocab.size()) return false;
  if (model.is_special[id]) return false;
  const std::string& token = model.vocab[id];
  if (auto b = parse_byte_token(token); b && model.profile.byte_fallback) {
    const uint8_t v = *b;
    return !(v == 0x09 || v == 0x0A || v == 0x0B || v == 0x0C || v == 0x0D || v == 0x20);
  }
  std::string content = model.profile.byte_level_pretok ? byte_level_to_bytes(token) : token;
  size_t i = 0;
  uint32_t cp;
  while (i < content.size()) {
    if (!utf8::next(content, i, cp)) return true;  // undecodable byte: counts
    if (cp != kWordMarkerCp && !uni::is_whitespace(cp)) return true;
  }
  return false;
}

inline uint64_t countable_tokens(const TokenizerModel& model, const std::vector<int32_t>& ids) {
  uint64_t n = 0;
  for (int32_t id : ids)
    if (counts_for_metrics(model, id)) ++n;
  return n;
}

}  // namespace tokscope
