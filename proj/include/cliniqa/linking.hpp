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

// Dictionary entity linking: greedy longest-match, left-to-right,
// case-insensitive, respecting token boundaries, producing non-overlapping
// mentions with code-point offsets.

#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "cliniqa/knowledge_base.hpp"
#include "cliniqa/text.hpp"
#include "cliniqa/utf8.hpp"

namespace cliniqa {

/// A linked entity occurrence; [start, end) are code-point offsets into the
/// text it was linked in, and `surface` is the original (uncased) slice.
struct EntityMention {
  std::string surface;
  std::string entity_id;
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const EntityMention&) const = default;
};

namespace detail {

inline bool at_word_boundary(std::string_view text, std::size_t pos) {
  return pos == 0 || pos == text.size() ||
         !is_word_char(text[pos - 1]) || !is_word_char(text[pos]);
}

}  // namespace detail

/// Scans `text` left to right; at each position the longest lexicon surface
/// that matches case-insensitively between token boundaries becomes a
/// mention, and scanning resumes after it. No match anywhere → empty.
inline std::vector<EntityMention> link_entities(std::string_view text,
                                                const Lexicon& lexicon) {
  if (lexicon.empty() || text.empty()) return {};

  // Longest surface first; among equal lengths, lexicographic for a stable
  // (if moot — equal-length matches at one spot are identical) order.
  std::vector<const Lexicon::value_type*> surfaces;
  surfaces.reserve(lexicon.size());
  for (const auto& entry : lexicon) surfaces.push_back(&entry);
  std::sort(surfaces.begin(), surfaces.end(), [](const auto* a, const auto* b) {
    if (a->first.size() != b->first.size()) return a->first.size() > b->first.size();
    return a->first < b->first;
  });

  std::string lowered = to_lower_ascii(std::string(text));
  const Utf8Index index(text);

  std::vector<EntityMention> mentions;
  std::size_t pos = 0;
  while (pos < lowered.size()) {
    if (!detail::at_word_boundary(lowered, pos)) {
      ++pos;
      continue;
    }
    const Lexicon::value_type* hit = nullptr;
    for (const auto* entry : surfaces) {
      const std::string& surface = entry->first;
      if (surface.size() > lowered.size() - pos) continue;
      if (lowered.compare(pos, surface.size(), surface) != 0) continue;
      if (!detail::at_word_boundary(lowered, pos + surface.size())) continue;
      hit = entry;
      break;
    }
    if (hit == nullptr) {
      ++pos;
      continue;
    }
    const std::size_t end_byte = pos + hit->first.size();
    EntityMention m;
    m.surface = std::string(text.substr(pos, hit->first.size()));
    m.entity_id = hit->second;
    m.start = index.cp_of(pos);
    m.end = index.cp_of(end_byte);
    mentions.push_back(std::move(m));
    pos = end_byte;
  }
  return mentions;
}

}  // namespace cliniqa
