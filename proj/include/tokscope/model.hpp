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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tokscope/error.hpp"
#include "tokscope/io.hpp"
#include "tokscope/profile.hpp"
#include "tokscope/utf8.hpp"

namespace tokscope {

inline constexpr int kModelFormatVersion = 1;

enum class Algorithm : uint8_t { kBpe, kUnigram };

inline constexpr std::string_view to_string(Algorithm a) {
  return a == Algorithm::kBpe ? "bpe" : "unigram";
}

inline Algorithm algorithm_from_string(std::string_view s) {
  if (s == "bpe") return Algorithm::kBpe;
  if (s == "unigram") return Algorithm::kUnigram;
  throw DataError("unknown algorithm: " + std::string(s));
}

/// Raw-byte token spelling: "<0xNN>".
inline std::string byte_token(uint8_t b) {
  static const char* digits = "0123456789ABCDEF";
  std::string s = "<0x00>";
  s[3] = digits[b >> 4];
  s[4] = digits[b & 0xF];
  return s;
}

inline std::optional<uint8_t> parse_byte_token(std::string_view token) {
  if (token.size() != 6 || token.substr(0, 3) != "<0x" || token.back() != '>') return std::nullopt;
  auto hex = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
  };
  const int hi = hex(token[3]), lo = hex(token[4]);
  if (hi < 0 || lo < 0) return std::nullopt;
  return static_cast<uint8_t>(hi * 16 + lo);
}

/// Trained vocabulary plus algorithm-specific state. Immutable after
/// training; encode/decode are pure and safe for concurrent use.
struct TokenizerModel {
  Algorithm algorithm = Algorithm::kBpe;
  Profile profile;
  std::vector<std::string> vocab;  // dense: id = index
  std::vector<std::pair<std::string, std::string>> merges;  // BPE only, in rank order
  std::vector<double> logprobs;  // Unigram only, aligned with vocab, <= 0
  bool size_warning = false;     // requested vocab size was unreachable

  // Derived lookups, rebuilt by finalize().
  std::unordered_map<std::string, int32_t> token_to_id;
  std::vector<char> is_special;
  std::vector<int32_t> byte_token_ids;  // 256 entries or empty
  size_t max_piece_cps = 0;

  size_t vocab_size() const { return vocab.size(); }

  int32_t id_of(std::string_view token) const {
    auto it = token_to_id.find(std::string(token));
    return it == token_to_id.end() ? -1 : it->second;
  }

  std::string name() const {
    return std::string(to_string(algorithm)) + "-" + std::string(to_string(profile.kind)) + "-" +
           std::to_string(vocab.size());
  }

  void finalize() {
    token_to_id.clear();
    token_to_id.reserve(vocab.size() * 2);
    for (size_t i = 0; i < vocab.size(); ++i) {
      auto [_, inserted] = token_to_id.emplace(vocab[i], static_cast<int32_t>(i));
      if (!inserted) throw DataError("duplicate token string in vocab: " + vocab[i]);
    }

    is_special.assign(vocab.size(), 0);
    std::unordered_set<std::string_view> specials(profile.specials.begin(),
                                                  profile.specials.end());
    for (size_t i = 0; i < vocab.size(); ++i)
      if (specials.count(vocab[i])) is_special[i] = 1;

    byte_token_ids.clear();
    if (profile.byte_fallback) {
      byte_token_ids.assign(256, -1);
      for (int b = 0; b < 256; ++b)
        byte_token_ids[b] = id_of(byte_token(static_cast<uint8_t>(b)));
    }

    max_piece_cps = 0;
    for (size_t i = 0; i < vocab.size(); ++i) {
      if (is_special[i] || parse_byte_token(vocab[i])) continue;
      max_piece_cps = std::max(max_piece_cps, utf8::decode(vocab[i]).size());
    }
  }

  /// Checks the structural invariants; call after load or training.
  void validate() const {
    profile.validate();
    if (token_to_id.size() != vocab.size()) throw DataError("model not finalized");
    if (algorithm == Algorithm::kBpe) {
      if (!logprobs.empty()) throw DataError("BPE model with logprobs");
      // each merge side must be a base symbol or an earlier merge output
      std::unordered_set<std::string_view> derivable;
      for (const auto& token : vocab) {
        if (parse_byte_token(token)) continue;
        if (utf8::decode(token).size() == 1) derivable.insert(token);
      }
      for (const auto& [left, right] : merges) {
        if (id_of(left) < 0 || id_of(right) < 0 || id_of(left + right) < 0)
          throw DataError("merge references token outside vocab: " + left + " + " + right);
        if (!derivable.count(left) || !derivable.count(right))
          throw DataError("merge is not a valid derivation: " + left + " + " + right);
        derivable.insert(token_to_id.find(left + right)->first);
      }
    } else {
      if (!merges.empty()) throw DataError("unigram model with merges");
      if (logprobs.size() != vocab.size()) throw DataError("logprobs size mismatch");
      for (double lp : logprobs)
        if (lp > 0.0) throw DataError("unigram log-probability above zero");
      if (profile.byte_fallback) {
        for (int b = 0; b < 256; ++b)
          if (byte_token_ids[b] < 0)
            throw DataError("byte fallback token missing: " + byte_token(uint8_t(b)));
      }
    }
    if (profile.byte_fallback && algorithm == Algorithm::kBpe) {
      for (int b = 0; b < 256; ++b)
        if (byte_token_ids[b] < 0)
          throw DataError("byte fallback token missing: " + byte_token(uint8_t(b)));
    }
  }
};

namespace detail {

inline nlohmann::json profile_to_json(const Profile& p) {
  nlohmann::json j;
  j["name"] = std::string(to_string(p.kind));
  j["strip_accents"] = p.strip_accents;
  j["lowercase"] = p.lowercase;
  j["dummy_prefix"] = p.dummy_prefix;
  j["digit_split"] = p.digit_split;
  j["byte_level_pretok"] = p.byte_level_pretok;
  j["byte_fallback"] = p.byte_fallback;
  if (p.limit_alphabet)
    j["limit_alphabet"] = *p.limit_alphabet;
  else
    j["limit_alphabet"] = nullptr;
  return j;
}

inline Profile profile_from_json(const nlohmann::json& j, std::vector<std::string> specials) {
  Profile p;
  const std::string name = j.at("name").get<std::string>();
  if (name == "sp")
    p.kind = ProfileKind::kSentencePiece;
  else if (name == "hf")
    p.kind = ProfileKind::kHuggingface;
  else
    throw DataError("unknown profile name: " + name);
  p.strip_accents = j.at("strip_accents").get<bool>();
  p.lowercase = j.at("lowercase").get<bool>();
  p.dummy_prefix = j.at("dummy_prefix").get<bool>();
  p.digit_split = j.at("digit_split").get<bool>();
  p.byte_level_pretok = j.at("byte_level_pretok").get<bool>();
  p.byte_fallback = j.at("byte_fallback").get<bool>();
  if (!j.at("limit_alphabet").is_null()) p.limit_alphabet = j.at("limit_alphabet").get<uint32_t>();
  p.specials = std::move(specials);
  return p;
}

}  // namespace detail

inline std::string model_to_string(const TokenizerModel& model) {
  nlohmann::json j;
  j["format_version"] = kModelFormatVersion;
  j["algorithm"] = std::string(to_string(model.algorithm));
  j["profile"] = detail::profile_to_json(model.profile);
  j["specials"] = model.profile.specials;
  j["vocab"] = model.vocab;
  if (model.algorithm == Algorithm::kBpe) {
    auto& m = j["merges"] = nlohmann::json::array();
    for (const auto& [l, r] : model.merges) m.push_back({l, r});
  } else {
    j["logprobs"] = model.logprobs;
  }
  j["size_warning"] = model.size_warning;
  return j.dump();
}

inline TokenizerModel model_from_string(std::string_view text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw DataError("model file is not valid JSON");
  if (!j.contains("format_version") || !j["format_version"].is_number_integer() ||
      j["format_version"].get<int>() != kModelFormatVersion)
    throw DataError("unsupported model format version");
  TokenizerModel model;
  model.algorithm = algorithm_from_string(j.at("algorithm").get<std::string>());
  model.profile = detail::profile_from_json(j.at("profile"),
                                            j.at("specials").get<std::vector<std::string>>());
  model.vocab = j.at("vocab").get<std::vector<std::string>>();
  if (model.algorithm == Algorithm::kBpe) {
    for (const auto& m : j.at("merges")) {
      if (!m.is_array() || m.size() != 2) throw DataError("malformed merge entry");
      model.merges.emplace_back(m[0].get<std::string>(), m[1].get<std::string>());
    }
  } else {
    model.logprobs = j.at("logprobs").get<std::vector<double>>();
  }
  model.size_warning = j.value("size_warning", false);
  model.finalize();
  model.validate();
  return model;
}

inline void save_model(const TokenizerModel& model, const std::filesystem::path& path) {
  io::atomic_write(path, model_to_string(model));
}

inline TokenizerModel load_model(const std::filesystem::path& path) {
  return model_from_string(io::read_file(path));
}

}  // namespace tokscope
