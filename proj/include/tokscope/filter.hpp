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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tokscope/document.hpp"

namespace tokscope {

/// Quality/harmfulness filter policy. A document is dropped iff its
/// warnings intersect drop_warnings, or its harmful score is present and
/// below harmful_threshold, or the score is absent and
/// drop_missing_harmful is set.
struct FilterPolicy {
  WarningSet drop_warnings;
  double harmful_threshold = 5.0;
  bool drop_missing_harmful = false;

  /// Drops whole-document defects (tiny, adult, noisy); header, footer
  /// and short_sentences describe recoverable layout issues and are
  /// warn-only by default.
  static FilterPolicy defaults() {
    FilterPolicy p;
    p.drop_warnings.insert(QualityWarning::kTiny);
    p.drop_warnings.insert(QualityWarning::kAdult);
    p.drop_warnings.insert(QualityWarning::kNoisy);
    return p;
  }
};

struct FilterResult {
  Corpus kept;
  // Drop tallies keyed by first matching reason: "warning:<label>" in
  // label order, then "harmful_below_threshold", then "harmful_missing".
  std::map<std::string, uint64_t> dropped_by_reason;
  uint64_t dropped = 0;
};

inline std::optional<std::string> filter_drop_reason(const Document& doc,
                                                     const FilterPolicy& policy) {
  for (int i = 0; i < kNumQualityWarnings; ++i) {
    auto w = static_cast<QualityWarning>(i);
    if (policy.drop_warnings.contains(w) && doc.quality_warnings.contains(w))
      return "warning:" + std::string(to_string(w));
  }
  if (doc.harmful_ppl) {
    if (*doc.harmful_ppl < policy.harmful_threshold) return "harmful_below_threshold";
  } else if (policy.drop_missing_harmful) {
    return "harmful_missing";
  }
  return std::nullopt;
}

inline FilterResult filter(const Corpus& docs, const FilterPolicy& policy) {
  FilterResult result;
  result.kept.reserve(docs.size());
  for (const auto& doc : docs) {
    if (auto reason = filter_drop_reason(doc, policy)) {
      ++result.dropped;
      ++result.dropped_by_reason[*reason];
    } else {
      result.kept.push_back(doc);
    }
  }
  return result;
}

}  // namespace tokscope
