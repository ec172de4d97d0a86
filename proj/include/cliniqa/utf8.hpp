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

// All character offsets in the interchange formats count Unicode scalar
// values, not bytes. Strings are held as UTF-8 in memory; this header
// converts between the two offset spaces.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cliniqa/error.hpp"

namespace cliniqa {

/// Byte length of the UTF-8 sequence starting at `pos`, validating the
/// encoding (continuation bytes, overlongs, surrogates, range). Throws
/// FormatError on malformed input.
inline std::size_t utf8_sequence_length(std::string_view s, std::size_t pos) {
  const auto byte = [&](std::size_t i) -> unsigned {
    return static_cast<unsigned char>(s[i]);
  };
  const unsigned b0 = byte(pos);
  if (b0 < 0x80) return 1;
  std::size_t len = 0;
  std::uint32_t cp = 0;
  std::uint32_t min_cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
    min_cp = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
    min_cp = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
    min_cp = 0x10000;
  } else {
    throw FormatError("invalid UTF-8 lead byte at offset " + std::to_string(pos));
  }
  if (pos + len > s.size()) {
    throw FormatError("truncated UTF-8 sequence at offset " + std::to_string(pos));
  }
  for (std::size_t i = 1; i < len; ++i) {
    const unsigned b = byte(pos + i);
    if ((b & 0xC0) != 0x80) {
      throw FormatError("invalid UTF-8 continuation byte at offset " +
                        std::to_string(pos + i));
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min_cp || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    throw FormatError("invalid UTF-8 scalar value at offset " + std::to_string(pos));
  }
  return len;
}

/// Number of Unicode scalar values in a UTF-8 string.
inline std::size_t utf8_cp_count(std::string_view s) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < s.size(); i += utf8_sequence_length(s, i)) ++n;
  return n;
}

/// Precomputed code-point <-> byte offset map for one string. Cheap for
/// pure-ASCII input (no table is built).
class Utf8Index {
 public:
  explicit Utf8Index(std::string_view s) : bytes_(s.size()) {
    bool ascii = true;
    for (const char c : s) {
      if (static_cast<unsigned char>(c) >= 0x80) {
        ascii = false;
        break;
      }
    }
    if (ascii) {
      cp_count_ = s.size();
      return;
    }
    byte_of_.reserve(s.size() / 2);
    for (std::size_t i = 0; i < s.size(); i += utf8_sequence_length(s, i)) {
      byte_of_.push_back(static_cast<std::uint32_t>(i));
    }
    cp_count_ = byte_of_.size();
  }

  std::size_t cp_count() const { return cp_count_; }

  /// Byte offset of code point `cp`; `cp == cp_count()` maps to the end.
  std::size_t byte_of(std::size_t cp) const {
    if (cp > cp_count_) {
      throw InvalidArgument("code-point offset " + std::to_string(cp) +
                            " out of range (length " + std::to_string(cp_count_) + ")");
    }
    if (byte_of_.empty()) return cp;  // ASCII fast path
    return cp == cp_count_ ? bytes_ : byte_of_[cp];
  }

  /// Code-point offset of a byte position that must lie on a sequence
  /// boundary (or at the end of the string).
  std::size_t cp_of(std::size_t byte) const {
    if (byte > bytes_) {
      throw InvalidArgument("byte offset out of range");
    }
    if (byte_of_.empty()) return byte;
    if (byte == bytes_) return cp_count_;
    const auto it = std::lower_bound(byte_of_.begin(), byte_of_.end(),
                                     static_cast<std::uint32_t>(byte));
    if (it == byte_of_.end() || *it != byte) {
      throw InvalidArgument("byte offset not on a UTF-8 boundary");
    }
    return static_cast<std::size_t>(it - byte_of_.begin());
  }

 private:
  std::size_t bytes_ = 0;
  std::size_t cp_count_ = 0;
  std::vector<std::uint32_t> byte_of_;  // empty for pure-ASCII strings
};

/// Substring [cp_start, cp_end) in code-point offsets.
inline std::string_view utf8_slice(std::string_view s, const Utf8Index& index,
                                   std::size_t cp_start, std::size_t cp_end) {
  const std::size_t b0 = index.byte_of(cp_start);
  const std::size_t b1 = index.byte_of(cp_end);
  return s.substr(b0, b1 - b0);
}

}  // namespace cliniqa
