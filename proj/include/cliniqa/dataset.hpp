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

// Core corpus model: clinical notes with stable character offsets,
// extractive QA pairs, validation, document-level splitting and corpus
// statistics. All types are immutable values; operations are pure.

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cliniqa/error.hpp"
#include "cliniqa/rng.hpp"
#include "cliniqa/text.hpp"
#include "cliniqa/utf8.hpp"

namespace cliniqa {

/// Half-open [start, end) span in code-point offsets.
struct CharSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const CharSpan&) const = default;
};

/// A clinical note: the context a question is answered from. `lines` are
/// derived from `text` on construction: ordered, non-overlapping spans
/// that cover every non-newline character exactly once (a trailing line
/// without a final newline is included; blank lines appear as empty spans).
struct ClinicalNote {
  std::string note_id;
  std::string text;
  std::vector<CharSpan> lines;

  static ClinicalNote make(std::string note_id, std::string text) {
    ClinicalNote note;
    note.note_id = std::move(note_id);
    note.text = std::move(text);
    note.lines = compute_lines(note.text);
    return note;
  }

  static std::vector<CharSpan> compute_lines(std::string_view text) {
    std::vector<CharSpan> lines;
    std::size_t cp = 0;
    std::size_t line_start = 0;
    bool open = false;
    for (std::size_t byte = 0; byte < text.size();
         byte += utf8_sequence_length(text, byte), ++cp) {
      if (!open) {
        line_start = cp;
        open = true;
      }
      if (text[byte] == '\n') {
        lines.push_back(CharSpan{line_start, cp});
        open = false;
      }
    }
    if (open) lines.push_back(CharSpan{line_start, cp});
    return lines;
  }

  bool operator==(const ClinicalNote&) const = default;
};

/// A gold answer: a substring of the owning note starting at a code-point
/// offset. Invariant: note.text[answer_start .. answer_start + len(text))
/// reproduces `text` exactly.
struct AnswerSpan {
  std::string text;
  std::size_t answer_start = 0;

  bool operator==(const AnswerSpan&) const = default;
};

struct QAPair {
  std::string question_id;
  std::string question;
  std::string note_id;
  std::vector<AnswerSpan> answers;
  std::optional<std::string> template_id;
  std::optional<std::string> entity_surface;

  bool operator==(const QAPair&) const = default;
};

struct Dataset {
  std::vector<ClinicalNote> notes;
  std::vector<QAPair> qa_pairs;

  const ClinicalNote* find_note(std::string_view note_id) const {
    for (const auto& note : notes) {
      if (note.note_id == note_id) return &note;
    }
    return nullptr;
  }

  bool operator==(const Dataset&) const = default;
};

struct StatsReport {
  std::size_t n_questions = 0;
  std::size_t n_contexts = 0;
  std::size_t n_templates = 0;
  double avg_question_tokens = 0.0;
  double avg_answer_tokens = 0.0;
  double avg_context_tokens = 0.0;
  /// Fraction of QA pairs (among those carrying an entity_surface) whose
  /// surface occurs case-insensitively in at least one answer text.
  double key_phrase_overlap_rate = 0.0;

  bool operator==(const StatsReport&) const = default;
};

struct ValidationIssue {
  std::string record_id;
  std::string message;

  bool operator==(const ValidationIssue&) const = default;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool clean() const { return issues.empty(); }
};

namespace detail {

/// Checks one answer against its note; returns an error description or
/// nothing if the offsets reproduce the answer text.
inline std::optional<std::string> check_answer_span(const ClinicalNote& note,
                                                    const Utf8Index& index,
                                                    const AnswerSpan& answer) {
  const std::size_t answer_cp_len = utf8_cp_count(answer.text);
  if (answer.answer_start + answer_cp_len > index.cp_count()) {
    return "answer_start " + std::to_string(answer.answer_start) +
           " with length " + std::to_string(answer_cp_len) +
           " exceeds note length " + std::to_string(index.cp_count());
  }
  const std::string_view actual = utf8_slice(
      note.text, index, answer.answer_start, answer.answer_start + answer_cp_len);
  if (actual != answer.text) {
    return "answer text does not match note text at offset " +
           std::to_string(answer.answer_start);
  }
  return std::nullopt;
}

}  // namespace detail

/// Lists every invariant violation plus every answer longer than
/// `max_answer_tokens` whitespace tokens. Violations are report entries,
/// not failures; an empty report means the dataset is clean.
inline ValidationReport validate_dataset(const Dataset& dataset,
                                         std::size_t max_answer_tokens) {
  ValidationReport report;
  const auto add = [&](const std::string& id, std::string message) {
    report.issues.push_back(ValidationIssue{id, std::move(message)});
  };

  std::map<std::string_view, const ClinicalNote*> by_id;
  std::map<std::string_view, Utf8Index> note_index;
  for (const auto& note : dataset.notes) {
    if (!by_id.emplace(note.note_id, &note).second) {
      add(note.note_id, "duplicate note_id");
    } else {
      note_index.emplace(note.note_id, Utf8Index(note.text));
    }
  }

  std::set<std::string_view> seen_questions;
  for (const auto& qa : dataset.qa_pairs) {
    if (!seen_questions.insert(qa.question_id).second) {
      add(qa.question_id, "duplicate question_id");
    }
    if (qa.question.empty()) {
      add(qa.question_id, "question is empty");
    }
    if (qa.answers.empty()) {
      add(qa.question_id, "answer list is empty");
    }
    const auto note_it = by_id.find(qa.note_id);
    if (note_it == by_id.end()) {
      add(qa.question_id, "references unknown note_id '" + qa.note_id + "'");
      continue;
    }
    const Utf8Index& index = note_index.at(qa.note_id);
    for (const auto& answer : qa.answers) {
      if (auto problem = detail::check_answer_span(*note_it->second, index, answer)) {
        add(qa.question_id, *problem);
      }
      if (count_tokens(answer.text) > max_answer_tokens) {
        add(qa.question_id,
            "answer exceeds " + std::to_string(max_answer_tokens) + " tokens (" +
                std::to_string(count_tokens(answer.text)) + ")");
      }
    }
  }
  return report;
}

/// Counts plus whitespace-token averages over raw text. Empty dataset
/// yields a zeroed report.
inline StatsReport dataset_stats(const Dataset& dataset) {
  StatsReport report;
  report.n_questions = dataset.qa_pairs.size();
  report.n_contexts = dataset.notes.size();

  std::set<std::string_view> templates;
  std::size_t question_tokens = 0;
  std::size_t answer_tokens = 0;
  std::size_t n_answers = 0;
  std::size_t with_surface = 0;
  std::size_t with_overlap = 0;
  for (const auto& qa : dataset.qa_pairs) {
    if (qa.template_id) templates.insert(*qa.template_id);
    question_tokens += count_tokens(qa.question);
    for (const auto& answer : qa.answers) {
      answer_tokens += count_tokens(answer.text);
      ++n_answers;
    }
    if (qa.entity_surface) {
      ++with_surface;
      const std::string needle = to_lower_ascii(*qa.entity_surface);
      for (const auto& answer : qa.answers) {
        if (to_lower_ascii(answer.text).find(needle) != std::string::npos) {
          ++with_overlap;
          break;
        }
      }
    }
  }
  std::size_t context_tokens = 0;
  for (const auto& note : dataset.notes) context_tokens += count_tokens(note.text);

  report.n_templates = templates.size();
  if (!dataset.qa_pairs.empty()) {
    report.avg_question_tokens =
        static_cast<double>(question_tokens) / static_cast<double>(dataset.qa_pairs.size());
  }
  if (n_answers > 0) {
    report.avg_answer_tokens =
        static_cast<double>(answer_tokens) / static_cast<double>(n_answers);
  }
  if (!dataset.notes.empty()) {
    report.avg_context_tokens =
        static_cast<double>(context_tokens) / static_cast<double>(dataset.notes.size());
  }
  if (with_surface > 0) {
    report.key_phrase_overlap_rate =
        static_cast<double>(with_overlap) / static_cast<double>(with_surface);
  }
  return report;
}

struct SplitRatios {
  double train = 0.7;
  double dev = 0.1;
  double test = 0.2;
};

/// Document-level split: notes are shuffled by `seed`, then partitioned
/// into floor(train*N) / floor(dev*N) / remainder; every QA pair travels
/// with its note. The floor arithmetic is evaluated with a 1e-9 nudge so
/// exact products (e.g. 0.7 * 10) are not lost to binary rounding.
inline std::array<Dataset, 3> split_by_documents(const Dataset& dataset,
                                                 SplitRatios ratios,
                                                 std::uint64_t seed) {
  if (!(ratios.train > 0.0 && ratios.dev > 0.0 && ratios.test > 0.0)) {
    throw InvalidArgument("split ratios must be positive");
  }
  const double sum = ratios.train + ratios.dev + ratios.test;
  if (std::abs(sum - 1.0) > 1e-9) {
    throw InvalidArgument("split ratios must sum to 1 (got " + std::to_string(sum) + ")");
  }
  const std::size_t n = dataset.notes.size();
  if (n < 3) {
    throw InvalidArgument("need at least 3 notes to split, got " + std::to_string(n));
  }

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);

  const auto portion = [n](double ratio) {
    return static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n) + 1e-9));
  };
  const std::size_t n_train = portion(ratios.train);
  const std::size_t n_dev = portion(ratios.dev);

  std::array<Dataset, 3> out;
  std::map<std::string_view, std::size_t> part_of;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t part = i < n_train ? 0 : (i < n_train + n_dev ? 1 : 2);
    const ClinicalNote& note = dataset.notes[order[i]];
    out[part].notes.push_back(note);
    part_of[note.note_id] = part;
  }
  for (const auto& qa : dataset.qa_pairs) {
    const auto it = part_of.find(qa.note_id);
    if (it == part_of.end()) {
      throw IntegrityError("qa '" + qa.question_id + "' references unknown note_id '" +
                           qa.note_id + "'");
    }
    out[it->second].qa_pairs.push_back(qa);
  }
  return out;
}

}  // namespace cliniqa
