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
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "tokscope/error.hpp"
#include "tokscope/hash.hpp"
#include "tokscope/unicode.hpp"
#include "tokscope/utf8.hpp"

namespace tokscope {

using ShingleSet = std::unordered_set<uint64_t>;

/// Hashes of each k-gram of casefolded whitespace-split words. Texts
/// with fewer than k words yield the single hash of the whole word
/// sequence, so every document has a non-empty shingle set.
inline ShingleSet shingles(std::string_view text, size_t k) {
  if (k < 1) throw UsageError("shingles: k must be >= 1");

  // casefolded per-word hashes in order
  std::vector<uint64_t> word_hashes;
  std::string word;
  size_t i = 0;
  uint32_t cp;
  auto flush = [&] {
    if (!word.empty()) {
      word_hashes.push_back(hash::fnv1a(word));
      word.clear();
    }
  };
  while (i < text.size()) {
    if (!utf8::next(text, i, cp)) {
      ++i;
      cp = 0xFFFD;
    }
    if (uni::is_whitespace(cp)) {
      flush();
    } else {
      utf8::append(uni::fold_case(cp), word);
    }
  }
  flush();

  auto window_hash = [](const uint64_t* begin, size_t n) {
    uint64_t h = 0x9AE16A3B2F90404FULL;
    for (size_t j = 0; j < n; ++j) h = hash::mix64(h ^ begin[j]);
    return h;
  };

  ShingleSet out;
  if (word_hashes.size() < k) {
    out.insert(window_hash(word_hashes.data(), word_hashes.size()));
    return out;
  }
  out.reserve(word_hashes.size() - k + 1);
  for (size_t j = 0; j + k <= word_hashes.size(); ++j)
    out.insert(window_hash(word_hashes.data() + j, k));
  return out;
}

/// Fixed-length vector of per-permutation hash minima. Component
/// agreement between two signatures is an unbiased estimator of the
/// Jaccard similarity of the underlying shingle sets.
struct MinHashSignature {
  std::vector<uint64_t> values;
  uint32_t num_perm = 0;
  uint64_t seed = 0;

  double agreement(const MinHashSignature& other) const {
    if (num_perm != other.num_perm || seed != other.seed)
      throw UsageError("minhash agreement: signatures from different hash families");
    size_t same = 0;
    for (size_t i = 0; i < values.size(); ++i)
      if (values[i] == other.values[i]) ++same;
    return static_cast<double>(same) / static_cast<double>(values.size());
  }
};

/// Per-permutation keys derived from the seed; h_i(x) = mix64(x ^ key_i)
/// is bijective per key, giving one permutation of the 64-bit universe.
inline std::vector<uint64_t> minhash_keys(uint32_t num_perm, uint64_t seed) {
  std::vector<uint64_t> keys(num_perm);
  uint64_t x = seed;
  for (auto& key : keys) {
    x = hash::mix64(x + 0x632BE59BD9B4E019ULL);
    key = x;
  }
  return keys;
}

inline MinHashSignature minhash(const ShingleSet& set, uint32_t num_perm, uint64_t seed) {
  if (set.empty()) throw UsageError("minhash: empty shingle set");
  const auto keys = minhash_keys(num_perm, seed);
  MinHashSignature sig;
  sig.num_perm = num_perm;
  sig.seed = seed;
  sig.values.assign(num_perm, std::numeric_limits<uint64_t>::max());
  for (uint64_t s : set) {
    for (uint32_t i = 0; i < num_perm; ++i) {
      const uint64_t h = hash::mix64(s ^ keys[i]);
      if (h < sig.values[i]) sig.values[i] = h;
    }
  }
  return sig;
}

inline double exact_jaccard(const ShingleSet& a, const ShingleSet& b) {
  if (a.empty() && b.empty()) return 1.0;
  const ShingleSet& small = a.size() <= b.size() ? a : b;
  const ShingleSet& large = a.size() <= b.size() ? b : a;
  size_t inter = 0;
  for (uint64_t s : small)
    if (large.count(s)) ++inter;
  const size_t uni = a.size() + b.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

/// A pair (x, y) with x < y is a candidate iff some band of r
/// consecutive signature components is identical between x and y.
/// Buckets key on the exact band content, so there are no false
/// positives from bucket-hash collisions.
inline std::vector<std::pair<size_t, size_t>> lsh_candidates(
    const std::vector<MinHashSignature>& signatures, uint32_t bands, uint32_t rows) {
  if (signatures.empty()) return {};
  const uint32_t num_perm = signatures.front().num_perm;
  if (bands * rows != num_perm)
    throw UsageError("lsh_candidates: bands * rows = " + std::to_string(bands * rows) +
                     " != num_perm = " + std::to_string(num_perm));

  std::unordered_set<uint64_t> seen_pairs;
  std::vector<std::pair<size_t, size_t>> pairs;
  std::unordered_map<std::string, std::vector<size_t>> buckets;
  std::string key;
  for (uint32_t band = 0; band < bands; ++band) {
    buckets.clear();
    for (size_t d = 0; d < signatures.size(); ++d) {
      const uint64_t* begin = signatures[d].values.data() + band * rows;
      key.assign(reinterpret_cast<const char*>(begin), rows * sizeof(uint64_t));
      buckets[key].push_back(d);
    }
    for (const auto& [_, members] : buckets) {
      if (members.size() < 2) continue;
      for (size_t i = 0; i < members.size(); ++i) {
        for (size_t j = i + 1; j < members.size(); ++j) {
          const uint64_t pair_key = (uint64_t(members[i]) << 32) | uint64_t(members[j]);
          if (seen_pairs.insert(pair_key).second) pairs.emplace_back(members[i], members[j]);
        }
      }
    }
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

}  // namespace tokscope
