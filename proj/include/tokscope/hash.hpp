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
#include <cstring>
#include <string>
#include <string_view>

namespace tokscope::hash {

/// splitmix64 finalizer. Bijective on 64-bit values, so seeding a hash
/// family as h_i(x) = mix64(x ^ key_i) yields one permutation of the
/// 64-bit universe per key.
inline uint64_t mix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// FNV-1a over raw bytes; cheap and stable across platforms.
inline uint64_t fnv1a(std::string_view bytes, uint64_t seed = 0xCBF29CE484222325ULL) {
  uint64_t h = seed;
  for (char c : bytes) {
    h ^= static_cast<uint8_t>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

namespace detail {

inline uint64_t rotl64(uint64_t x, int8_t r) { return (x << r) | (x >> (64 - r)); }

inline uint64_t fmix64(uint64_t k) {
  k ^= k >> 33;
  k *= 0xFF51AFD7ED558CCDULL;
  k ^= k >> 33;
  k *= 0xC4CEB9FE1A85EC53ULL;
  k ^= k >> 33;
  return k;
}

inline uint64_t getblock64(const uint8_t* p, size_t i) {
  uint64_t v;
  std::memcpy(&v, p + i * 8, 8);
  return v;
}

}  // namespace detail

/// MurmurHash3 x64 128-bit (public domain reference algorithm).
/// Used for content-digest document ids and corpus digests.
inline std::array<uint64_t, 2> murmur3_128(std::string_view data, uint64_t seed = 0) {
  const auto* bytes = reinterpret_cast<const uint8_t*>(data.data());
  const size_t len = data.size();
  const size_t nblocks = len / 16;

  uint64_t h1 = seed, h2 = seed;
  const uint64_t c1 = 0x87C37B91114253D5ULL;
  const uint64_t c2 = 0x4CF5AD432745937FULL;

  for (size_t i = 0; i < nblocks; ++i) {
    uint64_t k1 = detail::getblock64(bytes, i * 2 + 0);
    uint64_t k2 = detail::getblock64(bytes, i * 2 + 1);
    k1 *= c1;
    k1 = detail::rotl64(k1, 31);
    k1 *= c2;
    h1 ^= k1;
    h1 = detail::rotl64(h1, 27);
    h1 += h2;
    h1 = h1 * 5 + 0x52DCE729;
    k2 *= c2;
    k2 = detail::rotl64(k2, 33);
    k2 *= c1;
    h2 ^= k2;
    h2 = detail::rotl64(h2, 31);
    h2 += h1;
    h2 = h2 * 5 + 0x38495AB5;
  }

  const uint8_t* tail = bytes + nblocks * 16;
  uint64_t k1 = 0, k2 = 0;
  switch (len & 15) {
    case 15: k2 ^= uint64_t(tail[14]) << 48; [[fallthrough]];
    case 14: k2 ^= uint64_t(tail[13]) << 40; [[fallthrough]];
    case 13: k2 ^= uint64_t(tail[12]) << 32; [[fallthrough]];
    case 12: k2 ^= uint64_t(tail[11]) << 24; [[fallthrough]];
    case 11: k2 ^= uint64_t(tail[10]) << 16; [[fallthrough]];
    case 10: k2 ^= uint64_t(tail[9]) << 8; [[fallthrough]];
    case 9:
      k2 ^= uint64_t(tail[8]);
      k2 *= c2;
      k2 = detail::rotl64(k2, 33);
      k2 *= c1;
      h2 ^= k2;
      [[fallthrough]];
    case 8: k1 ^= uint64_t(tail[7]) << 56; [[fallthrough]];
    case 7: k1 ^= uint64_t(tail[6]) << 48; [[fallthrough]];
    case 6: k1 ^= uint64_t(tail[5]) << 40; [[fallthrough]];
    case 5: k1 ^= uint64_t(tail[4]) << 32; [[fallthrough]];
    case 4: k1 ^= uint64_t(tail[3]) << 24; [[fallthrough]];
    case 3: k1 ^= uint64_t(tail[2]) << 16; [[fallthrough]];
    case 2: k1 ^= uint64_t(tail[1]) << 8; [[fallthrough]];
    case 1:
      k1 ^= uint64_t(tail[0]);
      k1 *= c1;
      k1 = detail::rotl64(k1, 31);
      k1 *= c2;
      h1 ^= k1;
      break;
    default: break;
  }

  h1 ^= uint64_t(len);
  h2 ^= uint64_t(len);
  h1 += h2;
  h2 += h1;
  h1 = detail::fmix64(h1);
  h2 = detail::fmix64(h2);
  h1 += h2;
  h2 += h1;
  return {h1, h2};
}

inline std::string to_hex128(const std::array<uint64_t, 2>& d) {
  static const char* digits = "0123456789abcdef";
  std::string out(32, '0');
  for (int half = 0; half < 2; ++half) {
    uint64_t v = d[half];
    for (int i = 15; i >= 0; --i) {
      out[half * 16 + i] = digits[v & 0xF];
      v >>= 4;
    }
  }
  return out;
}

/// 128-bit content digest rendered as 32 hex characters.
inline std::string digest_hex(std::string_view data, uint64_t seed = 0) {
  return to_hex128(murmur3_128(data, seed));
}

}  // namespace tokscope::hash
