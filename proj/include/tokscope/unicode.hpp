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

#include <unicode/uchar.h>
#include <unicode/unorm2.h>
#include <unicode/ustring.h>

#include <string>
#include <string_view>
#include <vector>

#include "tokscope/error.hpp"

namespace tokscope::uni {

inline bool is_whitespace(uint32_t cp) {
  return u_isUWhiteSpace(static_cast<UChar32>(cp));
}

inline bool is_decimal_digit(uint32_t cp) {
  return u_charType(static_cast<UChar32>(cp)) == U_DECIMAL_DIGIT_NUMBER;
}

inline uint32_t fold_case(uint32_t cp) {
  return static_cast<uint32_t>(u_foldCase(static_cast<UChar32>(cp), U_FOLD_CASE_DEFAULT));
}

namespace detail {

inline std::vector<UChar> to_utf16(std::string_view utf8) {
  UErrorCode ec = U_ZERO_ERROR;
  std::vector<UChar> out(utf8.size() + 1);
  int32_t len = 0;
  u_strFromUTF8(out.data(), static_cast<int32_t>(out.size()), &len, utf8.data(),
                static_cast<int32_t>(utf8.size()), &ec);
  if (U_FAILURE(ec)) throw DataError("invalid UTF-8 input to normalizer");
  out.resize(static_cast<size_t>(len));
  return out;
}

inline std::string to_utf8(const UChar* buf, int32_t len) {
  UErrorCode ec = U_ZERO_ERROR;
  std::string out(static_cast<size_t>(len) * 4 + 4, '\0');
  int32_t len8 = 0;
  u_strToUTF8(out.data(), static_cast<int32_t>(out.size()), &len8, buf, len, &ec);
  if (U_FAILURE(ec)) throw DataError("UTF-16 to UTF-8 conversion failed");
  out.resize(static_cast<size_t>(len8));
  return out;
}

inline std::vector<UChar> run_normalizer(const UNormalizer2* n, const std::vector<UChar>& in) {
  UErrorCode ec = U_ZERO_ERROR;
  std::vector<UChar> out(in.size() * 2 + 16);
  int32_t len = unorm2_normalize(n, in.data(), static_cast<int32_t>(in.size()), out.data(),
                                 static_cast<int32_t>(out.size()), &ec);
  if (ec == U_BUFFER_OVERFLOW_ERROR) {
    ec = U_ZERO_ERROR;
    out.resize(static_cast<size_t>(len) + 1);
    len = unorm2_normalize(n, in.data(), static_cast<int32_t>(in.size()), out.data(),
                           static_cast<int32_t>(out.size()), &ec);
  }
  if (U_FAILURE(ec)) throw DataError("unicode normalization failed");
  out.resize(static_cast<size_t>(len));
  return out;
}

inline const UNormalizer2* instance(const UNormalizer2* (*getter)(UErrorCode*)) {
  UErrorCode ec = U_ZERO_ERROR;
  const UNormalizer2* n = getter(&ec);
  if (U_FAILURE(ec)) throw DataError("ICU normalizer unavailable");
  return n;
}

}  // namespace detail

/// NFKC normalization.
inline std::string nfkc(std::string_view utf8) {
  static const UNormalizer2* n = detail::instance(&unorm2_getNFKCInstance);
  auto u16 = detail::to_utf16(utf8);
  auto out = detail::run_normalizer(n, u16);
  return detail::to_utf8(out.data(), static_cast<int32_t>(out.size()));
}

/// NFKD, drop non-spacing marks, recompose with NFC. This is the
/// accent-stripping flavour of compatibility normalization; idempotent
/// together with nfkc() (covered by property tests).
inline std::string nfkc_strip_accents(std::string_view utf8) {
  static const UNormalizer2* nfkd = detail::instance(&unorm2_getNFKDInstance);
  static const UNormalizer2* nfc = detail::instance(&unorm2_getNFCInstance);
  auto u16 = detail::to_utf16(utf8);
  auto decomposed = detail::run_normalizer(nfkd, u16);

  std::vector<UChar> kept;
  kept.reserve(decomposed.size());
  const int32_t n = static_cast<int32_t>(decomposed.size());
  for (int32_t i = 0; i < n;) {
    UChar32 c;
    U16_NEXT(decomposed.data(), i, n, c);
    if (u_charType(c) == U_NON_SPACING_MARK) continue;
    UChar tmp[2];
    int32_t tl = 0;
    UBool err = false;
    U16_APPEND(tmp, tl, 2, c, err);
    if (err) continue;
    for (int32_t k = 0; k < tl; ++k) kept.push_back(tmp[k]);
  }
  auto composed = detail::run_normalizer(nfc, kept);
  return detail::to_utf8(composed.data(), static_cast<int32_t>(composed.size()));
}

}  // namespace tokscope::uni
