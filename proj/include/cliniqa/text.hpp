// Copyright 2026 The cliniqa Authors.
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

// Tokenization and small string helpers. Token counts everywhere in the
// toolkit are whitespace tokens over raw text; case folding is ASCII-only
// so results do not depend on the process locale.

#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "cliniqa/utf8.hpp"

namespace cliniqa {

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline char to_lower_ascii(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = to_lower_ascii(c);
  return out;
}

inline bool is_ascii_alpha(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

inline bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }

/// Word characters for boundary checks: ASCII alphanumerics plus any
/// non-ASCII byte (multi-byte code points never act as word boundaries).
inline bool is_word_char(char c) {
  return is_ascii_alpha(c) || is_ascii_digit(c) ||
         static_cast<unsigned char>(c) >= 0x80;
}

inline std::string_view trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

/// Whitespace tokens of `s` as views into it.
inline std::vector<std::string_view> split_tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    const std::size_t start = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

inline std::size_t count_tokens(std::string_view s) {
  std::size_t n = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    if (i < s.size()) ++n;
    while (i < s.size() && !is_space(s[i])) ++i;
  }
  return n;
}

/// A whitespace token with its [start, end) code-point offsets.
struct Token {
  std::string text;
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const Token&) const = default;
};

/// Whitespace tokenization with code-point offsets into `s`.
inline std::vector<Token> tokenize_with_offsets(std::string_view s) {
  std::vector<Token> out;
  std::size_t byte = 0;
  std::size_t cp = 0;
  std::size_t tok_byte = 0;
  std::size_t tok_cp = 0;
  bool in_token = false;
  while (byte < s.size()) {
    const std::size_t len = utf8_sequence_length(s, byte);
    const bool space = len == 1 && is_space(s[byte]);
    if (!space && !in_token) {
      in_token = true;
      tok_byte = byte;
      tok_cp = cp;
    } else if (space && in_token) {
      out.push_back(Token{std::string(s.substr(tok_byte, byte - tok_byte)), tok_cp, cp});
      in_token = false;
    }
    byte += len;
    ++cp;
  }
  if (in_token) {
    out.push_back(Token{std::string(s.substr(tok_byte)), tok_cp, cp});
  }
  return out;
}

/// Shortest decimal form that round-trips a double exactly.
inline std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  double back = 0.0;
  if (std::sscanf(buf, "%lf", &back) == 1 && back == v) {
    for (int prec = 1; prec < 17; ++prec) {
      char shorter[32];
      std::snprintf(shorter, sizeof shorter, "%.*g", prec, v);
      if (std::sscanf(shorter, "%lf", &back) == 1 && back == v) {
        return shorter;
      }
    }
  }
  return buf;
}

/// FNV-1a 64-bit hash; used for stable record ids and seed derivation.
inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xF];
    v >>= 4;
  }
  return out;
}

}  // namespace cliniqa
