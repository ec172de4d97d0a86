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

// Dataset generation: bind typed entity annotations to question templates,
// substitute placeholders, and take the full (trimmed) physical line around
// each annotation as the gold answer. Repeated (template, note, entity)
// combinations merge into one question with several gold spans.

#pragma once

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cliniqa/dataset.hpp"
#include "cliniqa/dataset_io.hpp"
#include "cliniqa/error.hpp"
#include "cliniqa/text.hpp"
#include "cliniqa/utf8.hpp"

namespace cliniqa {

/// A question skeleton with typed placeholders written |type|, e.g.
/// "Has this patient ever been on |medication|?". Placeholder types are
/// lowercase names; at least one placeholder is required.
struct QuestionTemplate {
  std::string template_id;
  std::string text;
  std::vector<std::string> placeholder_types;

  static QuestionTemplate make(std::string template_id, std::string text);

  bool operator==(const QuestionTemplate&) const = default;
};

/// An expert-labeled entity span in a note, with [start, end) code-point
/// offsets and the placeholder type it can fill.
struct AnnotationRecord {
  std::string note_id;
  std::string surface;
  std::string type;
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const AnnotationRecord&) const = default;
};

namespace detail {

struct Placeholder {
  std::string type;
  std::size_t byte_start = 0;  // position of the opening bar
  std::size_t byte_end = 0;    // one past the closing bar
};

inline bool is_placeholder_type(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return (c >= 'a' && c <= 'z') || c == '_'; });
}

inline std::vector<Placeholder> find_placeholders(std::string_view text) {
  std::vector<Placeholder> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const std::size_t open = text.find('|', i);
    if (open == std::string_view::npos) break;
    const std::size_t close = text.find('|', open + 1);
    if (close == std::string_view::npos) break;
    const std::string_view inner = text.substr(open + 1, close - open - 1);
    if (is_placeholder_type(inner)) {
      out.push_back(Placeholder{std::string(inner), open, close + 1});
      i = close + 1;
    } else {
      i = close;  // the closing bar may open the next placeholder
    }
  }
  return out;
}

/// Validates an annotation against its note; throws IntegrityError.
inline void check_annotation(const ClinicalNote& note, const Utf8Index& index,
                             const AnnotationRecord& ann) {
  if (ann.note_id != note.note_id) {
    throw IntegrityError("annotation '" + ann.surface + "' belongs to note '" +
                         ann.note_id + "', not '" + note.note_id + "'");
  }
  if (ann.start >= ann.end || ann.end > index.cp_count()) {
    throw IntegrityError("annotation '" + ann.surface + "' in note '" + note.note_id +
                         "' has invalid span [" + std::to_string(ann.start) + ", " +
                         std::to_string(ann.end) + ")");
  }
  if (utf8_slice(note.text, index, ann.start, ann.end) != ann.surface) {
    throw IntegrityError("annotation in note '" + note.note_id + "' at offset " +
                         std::to_string(ann.start) + " does not match surface '" +
                         ann.surface + "'");
  }
}

/// Trimmed copy of the line covering code points [line.start, line.end).
inline AnswerSpan trimmed_line_span(const ClinicalNote& note, const Utf8Index& index,
                                    CharSpan line) {
  std::size_t b0 = index.byte_of(line.start);
  std::size_t b1 = index.byte_of(line.end);
  std::size_t cp_start = line.start;
  while (b0 < b1 && is_space(note.text[b0])) {
    ++b0;
    ++cp_start;  // ASCII whitespace is one byte and one code point
  }
  while (b1 > b0 && is_space(note.text[b1 - 1])) --b1;
  return AnswerSpan{note.text.substr(b0, b1 - b0), cp_start};
}

inline AnswerSpan extract_evidence_indexed(const ClinicalNote& note,
                                           const Utf8Index& index,
                                           const AnnotationRecord& ann) {
  check_annotation(note, index, ann);
  // Last line starting at or before the annotation; empty lines cannot
  // contain it.
  const auto it = std::upper_bound(
      note.lines.begin(), note.lines.end(), ann.start,
      [](std::size_t pos, const CharSpan& line) { return pos < line.start; });
  if (it == note.lines.begin()) {
    throw IntegrityError("annotation '" + ann.surface + "' lies outside any line");
  }
  const CharSpan line = *(it - 1);
  if (ann.start >= line.end) {
    throw IntegrityError("annotation '" + ann.surface +
                         "' in note '" + note.note_id + "' starts on a line break");
  }
  if (ann.end > line.end) {
    throw IntegrityError("annotation '" + ann.surface + "' in note '" + note.note_id +
                         "' spans a newline");
  }
  return trimmed_line_span(note, index, line);
}

}  // namespace detail

inline QuestionTemplate QuestionTemplate::make(std::string template_id, std::string text) {
  QuestionTemplate tmpl;
  tmpl.template_id = std::move(template_id);
  tmpl.text = std::move(text);
  for (auto& placeholder : detail::find_placeholders(tmpl.text)) {
    tmpl.placeholder_types.push_back(std::move(placeholder.type));
  }
  if (tmpl.placeholder_types.empty()) {
    throw FormatError("template '" + tmpl.template_id +
                      "' contains no |type| placeholder: " + tmpl.text);
  }
  for (const auto& type : tmpl.placeholder_types) {
    if (type != tmpl.placeholder_types.front()) {
      throw FormatError("template '" + tmpl.template_id +
                        "' mixes placeholder types '" + tmpl.placeholder_types.front() +
                        "' and '" + type + "'");
    }
  }
  return tmpl;
}

/// Replaces every placeholder with the annotation surface. The annotation
/// type must equal every placeholder type (single-type templates only).
inline std::string instantiate_template(const QuestionTemplate& tmpl,
                                        const AnnotationRecord& ann) {
  for (const auto& type : tmpl.placeholder_types) {
    if (type != ann.type) {
      throw InvalidArgument("template '" + tmpl.template_id + "' expects type '" +
                            type + "', annotation has type '" + ann.type + "'");
    }
  }
  std::string out;
  out.reserve(tmpl.text.size() + ann.surface.size());
  std::size_t i = 0;
  for (const auto& placeholder : detail::find_placeholders(tmpl.text)) {
    out.append(tmpl.text, i, placeholder.byte_start - i);
    out.append(ann.surface);
    i = placeholder.byte_end;
  }
  out.append(tmpl.text, i, std::string::npos);
  return out;
}

/// The gold answer for an annotation: the full physical line containing it,
/// with surrounding whitespace trimmed and answer_start adjusted.
inline AnswerSpan extract_evidence(const ClinicalNote& note, const AnnotationRecord& ann) {
  const Utf8Index index(note.text);
  return detail::extract_evidence_indexed(note, index, ann);
}

/// Deterministic question id from the merge key.
inline std::string make_question_id(std::string_view template_id, std::string_view note_id,
                                    std::string_view surface_lower) {
  std::string key;
  key.reserve(template_id.size() + note_id.size() + surface_lower.size() + 2);
  key.append(template_id);
  key.push_back('\x1f');
  key.append(note_id);
  key.push_back('\x1f');
  key.append(surface_lower);
  return "q" + hex64(fnv1a64(key));
}

/// Generates QA pairs for one note. For every (template, annotation) pair
/// with matching types one question is instantiated; pairs sharing
/// (template_id, note_id, lowercased surface) merge into a single QAPair
/// that collects each occurrence's evidence line (deduplicated by span).
/// Answers longer than `max_answer_tokens` are dropped, and QA pairs left
/// without answers are dropped with them.
inline std::vector<QAPair> generate_qa_pairs(const ClinicalNote& note,
                                             const std::vector<QuestionTemplate>& templates,
                                             const std::vector<AnnotationRecord>& annotations,
                                             std::size_t max_answer_tokens) {
  const Utf8Index index(note.text);

  struct Group {
    const QuestionTemplate* tmpl = nullptr;
    const AnnotationRecord* first = nullptr;
    std::string surface_lower;
    std::vector<AnswerSpan> answers;
  };
  std::vector<Group> groups;
  std::map<std::pair<std::string_view, std::string>, std::size_t> group_of;

  for (const auto& tmpl : templates) {
    for (const auto& ann : annotations) {
      if (ann.type != tmpl.placeholder_types.front()) continue;
      const AnswerSpan evidence = detail::extract_evidence_indexed(note, index, ann);
      std::string surface_lower = to_lower_ascii(ann.surface);
      const auto key = std::make_pair(std::string_view(tmpl.template_id), surface_lower);
      auto it = group_of.find(key);
      if (it == group_of.end()) {
        groups.push_back(Group{&tmpl, &ann, surface_lower, {}});
        it = group_of.emplace(std::make_pair(std::string_view(tmpl.template_id),
                                             std::move(surface_lower)),
                              groups.size() - 1)
                 .first;
      }
      auto& answers = groups[it->second].answers;
      if (std::find(answers.begin(), answers.end(), evidence) == answers.end()) {
        answers.push_back(evidence);
      }
    }
  }

  std::vector<QAPair> out;
  for (const auto& group : groups) {
    QAPair qa;
    for (const auto& answer : group.answers) {
      if (count_tokens(answer.text) <= max_answer_tokens) qa.answers.push_back(answer);
    }
    if (qa.answers.empty()) continue;
    qa.question_id =
        make_question_id(group.tmpl->template_id, note.note_id, group.surface_lower);
    qa.question = instantiate_template(*group.tmpl, *group.first);
    qa.note_id = note.note_id;
    qa.template_id = group.tmpl->template_id;
    qa.entity_surface = group.first->surface;
    out.push_back(std::move(qa));
  }
  return out;
}

/// Corpus-level generation: annotations are routed to their notes (file
/// order preserved within each note) and the per-note results concatenated
/// in note order.
inline Dataset generate_dataset(const std::vector<ClinicalNote>& notes,
                                const std::vector<QuestionTemplate>& templates,
                                const std::vector<AnnotationRecord>& annotations,
                                std::size_t max_answer_tokens) {
  std::map<std::string_view, std::vector<AnnotationRecord>> per_note;
  std::map<std::string_view, const ClinicalNote*> by_id;
  for (const auto& note : notes) {
    if (!by_id.emplace(note.note_id, &note).second) {
      throw IntegrityError("duplicate note_id '" + note.note_id + "'");
    }
  }
  for (const auto& ann : annotations) {
    if (by_id.find(ann.note_id) == by_id.end()) {
      throw IntegrityError("annotation '" + ann.surface + "' references unknown note_id '" +
                           ann.note_id + "'");
    }
    per_note[ann.note_id].push_back(ann);
  }

  Dataset dataset;
  dataset.notes = notes;
  for (const auto& note : notes) {
    const auto it = per_note.find(note.note_id);
    if (it == per_note.end()) continue;
    auto pairs = generate_qa_pairs(note, templates, it->second, max_answer_tokens);
    for (auto& qa : pairs) dataset.qa_pairs.push_back(std::move(qa));
  }
  return dataset;
}

/// Templates file: JSON array of {template_id, text}.
inline std::vector<QuestionTemplate> load_templates(const std::filesystem::path& path) {
  const auto root = detail::parse_json_file(path);
  try {
    std::vector<QuestionTemplate> out;
    std::map<std::string, bool> seen;
    for (const auto& j : root) {
      auto tmpl = QuestionTemplate::make(j.at("template_id").get<std::string>(),
                                         j.at("text").get<std::string>());
      if (seen[tmpl.template_id]) {
        throw IntegrityError("duplicate template_id '" + tmpl.template_id + "'");
      }
      seen[tmpl.template_id] = true;
      out.push_back(std::move(tmpl));
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

/// Annotations file: JSON array of {note_id, surface, type, start, end}.
inline std::vector<AnnotationRecord> load_annotations(const std::filesystem::path& path) {
  const auto root = detail::parse_json_file(path);
  try {
    std::vector<AnnotationRecord> out;
    for (const auto& j : root) {
      AnnotationRecord ann;
      ann.note_id = j.at("note_id").get<std::string>();
      ann.surface = j.at("surface").get<std::string>();
      ann.type = j.at("type").get<std::string>();
      ann.start = j.at("start").get<std::size_t>();
      ann.end = j.at("end").get<std::size_t>();
      out.push_back(std::move(ann));
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace cliniqa
