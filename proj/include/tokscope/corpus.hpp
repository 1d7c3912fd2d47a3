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
#include <filesystem>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "tokscope/document.hpp"
#include "tokscope/error.hpp"
#include "tokscope/io.hpp"
#include "tokscope/rng.hpp"
#include "tokscope/unicode.hpp"
#include "tokscope/utf8.hpp"

namespace tokscope {

/// Number of maximal non-whitespace runs (Unicode White_Space class).
/// This is the word definition used corpus-wide: it is the denominator
/// of fertility and the unit of mixture targets.
inline uint64_t count_words(std::string_view text) {
  uint64_t words = 0;
  bool in_word = false;
  size_t i = 0;
  uint32_t cp;
  while (i < text.size()) {
    if (!utf8::next(text, i, cp)) {
      ++i;  // treat a malformed byte as a word character
      cp = 0xFFFD;
    }
    const bool ws = uni::is_whitespace(cp);
    if (!ws && !in_word) {
      ++words;
      in_word = true;
    } else if (ws) {
      in_word = false;
    }
  }
  return words;
}

struct IngestStats {
  uint64_t accepted = 0;
  uint64_t skipped = 0;
  std::map<std::string, uint64_t> skipped_by_issue;
};

struct IngestResult {
  Corpus documents;
  IngestStats stats;
};

/// Reads line-delimited document records from `path`. Malformed lines
/// are counted and skipped; ids are deterministic for identical
/// (source, ordinal, content).
inline IngestResult ingest(const std::filesystem::path& path, std::string_view source,
                           std::string_view language) {
  IngestResult result;
  auto lines = io::read_lines(path);
  result.documents.reserve(lines.size());
  for (const auto& line : lines) {
    if (line.empty()) continue;
    Document doc;
    auto issue = parse_document_line(line, source, language, result.stats.accepted, doc);
    if (issue) {
      ++result.stats.skipped;
      ++result.stats.skipped_by_issue[std::string(to_string(*issue))];
      continue;
    }
    ++result.stats.accepted;
    result.documents.push_back(std::move(doc));
  }
  return result;
}

inline void write_corpus(const std::filesystem::path& path, const Corpus& corpus) {
  std::string out;
  for (const auto& doc : corpus) {
    out += document_to_jsonl(doc);
    out.push_back('\n');
  }
  io::atomic_write(path, out);
}

struct MixtureEntry {
  std::string source;
  std::string language;
  uint64_t target_words = 0;
  std::filesystem::path path;  // used by the CLI; compose itself takes streams
};

struct MixtureSpec {
  std::vector<MixtureEntry> entries;
  uint64_t total_words = 0;

  void validate() const {
    uint64_t sum = 0;
    for (const auto& e : entries) sum += e.target_words;
    if (sum != total_words)
      throw UsageError("mixture entry targets sum to " + std::to_string(sum) +
                       ", expected total_words = " + std::to_string(total_words));
    for (size_t i = 0; i < entries.size(); ++i)
      for (size_t j = i + 1; j < entries.size(); ++j)
        if (entries[i].source == entries[j].source && entries[i].language == entries[j].language)
          throw UsageError("duplicate mixture entry (" + entries[i].source + ", " +
                           entries[i].language + ")");
  }
};

struct RealizedEntry {
  std::string source;
  std::string language;
  uint64_t target_words = 0;
  uint64_t realized_words = 0;
  uint64_t docs_taken = 0;
  bool exhausted = false;  // stream ran out before reaching the target
};

struct MixtureResult {
  Corpus corpus;
  std::vector<RealizedEntry> realized;
};

/// Greedy in-order accumulation: documents are taken from each entry's
/// stream until the running word count first reaches the target.
inline MixtureResult compose_mixture(const MixtureSpec& spec,
                                     const std::vector<Corpus>& streams) {
  spec.validate();
  if (streams.size() != spec.entries.size())
    throw UsageError("compose_mixture: got " + std::to_string(streams.size()) +
                     " streams for " + std::to_string(spec.entries.size()) + " entries");
  MixtureResult result;
  for (size_t e = 0; e < spec.entries.size(); ++e) {
    const auto& entry = spec.entries[e];
    RealizedEntry realized{entry.source, entry.language, entry.target_words, 0, 0, false};
    for (const auto& doc : streams[e]) {
      if (realized.realized_words >= entry.target_words) break;
      realized.realized_words += count_words(doc.text);
      ++realized.docs_taken;
      result.corpus.push_back(doc);
    }
    realized.exhausted = realized.realized_words < entry.target_words;
    result.realized.push_back(std::move(realized));
  }
  return result;
}

struct CorpusSplit {
  Corpus train;
  Corpus holdout;
  uint64_t seed = 0;
};

/// Seeded uniform sample of exactly `n` documents into the holdout;
/// both parts keep the original relative order.
inline CorpusSplit split_holdout(const Corpus& corpus, size_t n, uint64_t seed) {
  if (n > corpus.size())
    throw UsageError("split_holdout: n = " + std::to_string(n) + " exceeds corpus size " +
                     std::to_string(corpus.size()));
  std::vector<size_t> indices(corpus.size());
  std::iota(indices.begin(), indices.end(), 0);
  Xoshiro256 rng(seed);
  fisher_yates(indices, rng);
  std::vector<char> in_holdout(corpus.size(), 0);
  for (size_t i = 0; i < n; ++i) in_holdout[indices[i]] = 1;

  CorpusSplit split;
  split.seed = seed;
  split.holdout.reserve(n);
  split.train.reserve(corpus.size() - n);
  for (size_t i = 0; i < corpus.size(); ++i) {
    if (in_holdout[i])
      split.holdout.push_back(corpus[i]);
    else
      split.train.push_back(corpus[i]);
  }
  return split;
}

/// Order-sensitive digest over document ids; identifies a corpus state
/// in manifests and in the train/holdout disjointness check.
inline std::string corpus_digest(const Corpus& corpus) {
  std::string material;
  material.reserve(corpus.size() * 33);
  for (const auto& doc : corpus) {
    material += doc.id;
    material.push_back('\n');
  }
  return hash::digest_hex(material);
}

inline uint64_t corpus_word_count(const Corpus& corpus) {
  uint64_t total = 0;
  for (const auto& doc : corpus) total += count_words(doc.text);
  return total;
}

}  // namespace tokscope
