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

// Clinical-note section segmentation. Headers are detected by a three-rule
// disjunction (phrase-colon lines, all-uppercase short lines, lexicon hits);
// sections partition the note text and QA contexts can be shortened to the
// section that contains the answer.

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "cliniqa/dataset.hpp"
#include "cliniqa/error.hpp"
#include "cliniqa/text.hpp"
#include "cliniqa/utf8.hpp"

namespace cliniqa {

/// A contiguous region of a note in [start, end) code-point offsets. The
/// header, when present, is the trimmed text of the section's first line;
/// the preamble before the first header has no header.
struct Section {
  std::optional<std::string> header;
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const Section&) const = default;
};

/// Phrases that mark a section start even without colon or uppercase cues.
/// Stands in for a full clinical section terminology; user-replaceable via
/// a lexicon file (one lowercase phrase per line).
inline constexpr std::array<std::string_view, 40> kDefaultHeaderLexicon = {
    "admission date",
    "discharge date",
    "date of birth",
    "chief complaint",
    "history of present illness",
    "past medical history",
    "past surgical history",
    "medications",
    "medications on admission",
    "medications on discharge",
    "discharge medications",
    "allergies",
    "family history",
    "social history",
    "physical examination",
    "physical exam",
    "review of systems",
    "vital signs",
    "laboratory data",
    "laboratory studies",
    "labs",
    "imaging",
    "radiology",
    "hospital course",
    "brief hospital course",
    "assessment",
    "assessment and plan",
    "plan",
    "impression",
    "diagnosis",
    "discharge diagnosis",
    "discharge diagnoses",
    "principal diagnosis",
    "secondary diagnoses",
    "procedures",
    "operations and procedures",
    "condition on discharge",
    "disposition",
    "followup instructions",
    "follow up",
};

namespace detail {

inline constexpr std::size_t kMaxHeaderTokens = 6;

inline std::string_view strip_trailing_colon(std::string_view s) {
  if (!s.empty() && s.back() == ':') s.remove_suffix(1);
  return trim(s);
}

/// Rule (a): the whole line is `phrase:` with a short, nonempty phrase.
inline bool is_phrase_colon_header(std::string_view trimmed) {
  if (trimmed.size() < 2 || trimmed.back() != ':') return false;
  const std::string_view phrase = trim(trimmed.substr(0, trimmed.size() - 1));
  return !phrase.empty() && count_tokens(phrase) <= kMaxHeaderTokens;
}

/// Rule (b): every letter uppercase, at least one letter, short line. The
/// letter requirement keeps blank, numeric, and separator lines out.
inline bool is_uppercase_header(std::string_view trimmed) {
  bool has_alpha = false;
  for (char c : trimmed) {
    if (c >= 'a' && c <= 'z') return false;
    if (c >= 'A' && c <= 'Z') has_alpha = true;
  }
  return has_alpha && count_tokens(trimmed) <= kMaxHeaderTokens;
}

}  // namespace detail

/// Line indices (ascending) of the note's section headers. A line is a
/// header iff it satisfies any of: (a) `phrase:` with ≤6 tokens, (b) all
/// letters uppercase with ≤6 tokens, (c) its lowercased colon-stripped text
/// appears in `header_lexicon`.
template <typename Phrases>
std::vector<std::size_t> detect_headers(const ClinicalNote& note,
                                        const Phrases& header_lexicon) {
  std::unordered_set<std::string_view> lexicon;
  for (const auto& phrase : header_lexicon) lexicon.insert(std::string_view(phrase));

  const Utf8Index index(note.text);
  std::vector<std::size_t> headers;
  for (std::size_t i = 0; i < note.lines.size(); ++i) {
    const std::size_t b0 = index.byte_of(note.lines[i].start);
    const std::size_t b1 = index.byte_of(note.lines[i].end);
    const std::string_view trimmed = trim(std::string_view(note.text).substr(b0, b1 - b0));
    if (trimmed.empty()) continue;
    bool is_header = detail::is_phrase_colon_header(trimmed) ||
                     detail::is_uppercase_header(trimmed);
    if (!is_header && !lexicon.empty()) {
      const std::string lowered = to_lower_ascii(std::string(trimmed));
      is_header = lexicon.count(detail::strip_trailing_colon(lowered)) > 0;
    }
    if (is_header) headers.push_back(i);
  }
  return headers;
}

inline std::vector<std::size_t> detect_headers(const ClinicalNote& note) {
  return detect_headers(note, kDefaultHeaderLexicon);
}

/// Splits the note at the given header lines. Each section runs from its
/// header line's first character up to the next header line (or the end of
/// the note); text before the first header becomes a headerless preamble.
/// The resulting spans partition [0, len(text)).
inline std::vector<Section> segment_note(const ClinicalNote& note,
                                         const std::vector<std::size_t>& headers) {
  for (std::size_t k = 0; k < headers.size(); ++k) {
    if (headers[k] >= note.lines.size() || (k > 0 && headers[k] <= headers[k - 1])) {
      throw InvalidArgument("header line indices must be ascending and in range");
    }
  }
  const Utf8Index index(note.text);
  const std::size_t total = index.cp_count();

  std::vector<Section> sections;
  if (headers.empty()) {
    sections.push_back(Section{std::nullopt, 0, total});
    return sections;
  }
  const std::size_t first_start = note.lines[headers.front()].start;
  if (first_start > 0) sections.push_back(Section{std::nullopt, 0, first_start});
  for (std::size_t k = 0; k < headers.size(); ++k) {
    const CharSpan line = note.lines[headers[k]];
    const std::size_t start = line.start;
    const std::size_t end =
        (k + 1 < headers.size()) ? note.lines[headers[k + 1]].start : total;
    const std::size_t b0 = index.byte_of(line.start);
    const std::size_t b1 = index.byte_of(line.end);
    std::string header{trim(std::string_view(note.text).substr(b0, b1 - b0))};
    sections.push_back(Section{std::move(header), start, end});
  }
  return sections;
}

inline std::vector<Section> segment_note(const ClinicalNote& note) {
  return segment_note(note, detect_headers(note));
}

/// Replaces a QA pair's context with the section containing its answer.
/// The section is the one wholly containing the first answer that fits in
/// any section; every answer inside that section is kept with answer_start
/// rebased to the section start (answers elsewhere are dropped). Throws
/// IntegrityError when no answer lies wholly inside one section.
inline std::pair<std::string, std::vector<AnswerSpan>> shorten_context(
    const QAPair& qa, const ClinicalNote& note, const std::vector<Section>& sections) {
  const Utf8Index index(note.text);

  const auto section_containing = [&](const AnswerSpan& a) -> const Section* {
    const std::size_t a_end = a.answer_start + utf8_cp_count(a.text);
    for (const auto& s : sections) {
      if (s.start <= a.answer_start && a_end <= s.end) return &s;
    }
    return nullptr;
  };

  const Section* chosen = nullptr;
  for (const auto& answer : qa.answers) {
    if ((chosen = section_containing(answer)) != nullptr) break;
  }
  if (chosen == nullptr) {
    throw IntegrityError("question '" + qa.question_id +
                         "': answer span crosses a section boundary");
  }

  std::vector<AnswerSpan> remapped;
  for (const auto& answer : qa.answers) {
    const std::size_t a_end = answer.answer_start + utf8_cp_count(answer.text);
    if (chosen->start <= answer.answer_start && a_end <= chosen->end) {
      remapped.push_back(AnswerSpan{answer.text, answer.answer_start - chosen->start});
    }
  }
  return {std::string(utf8_slice(note.text, index, chosen->start, chosen->end)),
          std::move(remapped)};
}

/// Loads a header lexicon: one phrase per line, lowercased here for safety;
/// blank lines and lines starting with '#' are skipped.
inline std::vector<std::string> load_header_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open header lexicon: " + path.string());
  std::vector<std::string> phrases;
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    phrases.push_back(to_lower_ascii(std::string(t)));
  }
  return phrases;
}

}  // namespace cliniqa
