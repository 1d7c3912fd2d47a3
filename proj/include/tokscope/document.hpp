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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tokscope/error.hpp"
#include "tokscope/hash.hpp"
#include "tokscope/utf8.hpp"

namespace tokscope {

/// Per-document quality annotations carried by the source corpus.
enum class QualityWarning : uint8_t {
  kTiny = 0,
  kShortSentences,
  kHeader,
  kFooter,
  kNoisy,
  kAdult,
};

inline constexpr int kNumQualityWarnings = 6;

inline constexpr std::string_view to_string(QualityWarning w) {
  switch (w) {
    case QualityWarning::kTiny: return "tiny";
    case QualityWarning::kShortSentences: return "short_sentences";
    case QualityWarning::kHeader: return "header";
    case QualityWarning::kFooter: return "footer";
    case QualityWarning::kNoisy: return "noisy";
    case QualityWarning::kAdult: return "adult";
  }
  return "?";
}

inline std::optional<QualityWarning> quality_warning_from_string(std::string_view s) {
  for (int i = 0; i < kNumQualityWarnings; ++i) {
    auto w = static_cast<QualityWarning>(i);
    if (to_string(w) == s) return w;
  }
  return std::nullopt;
}

/// Bitmask over the six warning labels.
class WarningSet {
 public:
  WarningSet() = default;

  void insert(QualityWarning w) { bits_ |= (1u << static_cast<int>(w)); }
  bool contains(QualityWarning w) const { return bits_ & (1u << static_cast<int>(w)); }
  bool empty() const { return bits_ == 0; }
  bool intersects(const WarningSet& other) const { return bits_ & other.bits_; }
  uint8_t bits() const { return bits_; }

  std::vector<std::string> to_strings() const {
    std::vector<std::string> out;
    for (int i = 0; i < kNumQualityWarnings; ++i) {
      auto w = static_cast<QualityWarning>(i);
      if (contains(w)) out.emplace_back(to_string(w));
    }
    return out;
  }

  friend bool operator==(const WarningSet&, const WarningSet&) = default;

 private:
  uint8_t bits_ = 0;
};

/// One text record. Immutable after ingestion; safe to share across
/// threads by const reference.
struct Document {
  std::string id;        // 32-hex-char content digest, unique within a corpus
  std::string source;    // source-collection tag
  std::string language;  // ISO 639-1 code
  std::string text;      // valid UTF-8, non-empty
  WarningSet quality_warnings;
  std::optional<double> harmful_ppl;  // lower = more likely harmful
};

using Corpus = std::vector<Document>;

/// Deterministic document id: 128-bit digest of (source, ordinal, text).
inline std::string document_id(std::string_view source, uint64_t ordinal, std::string_view text) {
  std::string material;
  material.reserve(source.size() + text.size() + 10);
  material.append(source);
  material.push_back('\x1f');
  for (int i = 0; i < 8; ++i) material.push_back(static_cast<char>((ordinal >> (8 * i)) & 0xFF));
  material.push_back('\x1f');
  material.append(text);
  return hash::digest_hex(material);
}

/// Why a JSONL record was rejected during ingestion.
enum class RecordIssue {
  kBadJson = 0,
  kMissingText,
  kEmptyText,
  kInvalidUtf8,
  kBadWarningLabel,
  kBadHarmfulPpl,
};

inline constexpr std::string_view to_string(RecordIssue r) {
  switch (r) {
    case RecordIssue::kBadJson: return "bad_json";
    case RecordIssue::kMissingText: return "missing_text";
    case RecordIssue::kEmptyText: return "empty_text";
    case RecordIssue::kInvalidUtf8: return "invalid_utf8";
    case RecordIssue::kBadWarningLabel: return "bad_warning_label";
    case RecordIssue::kBadHarmfulPpl: return "bad_harmful_ppl";
  }
  return "?";
}

/// Parses one JSONL document record. Returns the issue when the record
/// must be skipped. Fields `id`, `source` and `language` are optional on
/// input: pipeline stage files carry them, raw ingestion assigns them.
inline std::optional<RecordIssue> parse_document_line(std::string_view line,
                                                      std::string_view default_source,
                                                      std::string_view default_language,
                                                      uint64_t ordinal, Document& out) {
  nlohmann::json j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) return RecordIssue::kBadJson;
  if (!j.contains("text")) return RecordIssue::kMissingText;
  const auto& text = j["text"];
  if (!text.is_string()) return RecordIssue::kMissingText;
  out.text = text.get<std::string>();
  // nlohmann rejects invalid UTF-8 at parse time; the check stays as a
  // guard for callers constructing records by other means.
  if (!utf8::valid(out.text)) return RecordIssue::kInvalidUtf8;
  if (out.text.empty()) return RecordIssue::kEmptyText;

  out.quality_warnings = WarningSet{};
  if (j.contains("quality_warnings")) {
    const auto& qw = j["quality_warnings"];
    if (!qw.is_array()) return RecordIssue::kBadWarningLabel;
    for (const auto& item : qw) {
      if (!item.is_string()) return RecordIssue::kBadWarningLabel;
      auto w = quality_warning_from_string(item.get<std::string>());
      if (!w) return RecordIssue::kBadWarningLabel;
      out.quality_warnings.insert(*w);
    }
  }

  out.harmful_ppl.reset();
  if (j.contains("harmful_ppl") && !j["harmful_ppl"].is_null()) {
    const auto& hp = j["harmful_ppl"];
    if (!hp.is_number()) return RecordIssue::kBadHarmfulPpl;
    double v = hp.get<double>();
    if (v < 0.0) return RecordIssue::kBadHarmfulPpl;
    out.harmful_ppl = v;
  }

  out.source = j.contains("source") && j["source"].is_string() ? j["source"].get<std::string>()
                                                               : std::string(default_source);
  out.language = j.contains("language") && j["language"].is_string()
                     ? j["language"].get<std::string>()
                     : std::string(default_language);
  out.id = j.contains("id") && j["id"].is_string() ? j["id"].get<std::string>()
                                                   : document_id(out.source, ordinal, out.text);
  return std::nullopt;
}

inline std::string document_to_jsonl(const Document& doc) {
  nlohmann::json j;
  j["id"] = doc.id;
  j["source"] = doc.source;
  j["language"] = doc.language;
  j["text"] = doc.text;
  if (!doc.quality_warnings.empty()) j["quality_warnings"] = doc.quality_warnings.to_strings();
  if (doc.harmful_ppl) j["harmful_ppl"] = *doc.harmful_ppl;
  return j.dump();
}

}  // namespace tokscope
