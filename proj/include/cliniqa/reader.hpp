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

// A deterministic line-level reader: each note line is scored by
// (1−λ)·jaccard(question tokens, line tokens) plus λ·max-cosine between
// fused entity vectors of question and line mentions; the best line (ties:
// earliest) is returned as the answer. No training involved; it exists so
// the pipeline runs end-to-end and knowledge utility is measurable.

#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cliniqa/dataset.hpp"
#include "cliniqa/error.hpp"
#include "cliniqa/evaluation.hpp"
#include "cliniqa/generation.hpp"
#include "cliniqa/kim.hpp"
#include "cliniqa/knowledge_base.hpp"
#include "cliniqa/linking.hpp"
#include "cliniqa/text.hpp"
#include "cliniqa/transe.hpp"
#include "cliniqa/utf8.hpp"

namespace cliniqa {

enum class ReaderMode { kLexical, kLexicalKnowledge };

inline const char* reader_mode_name(ReaderMode mode) {
  return mode == ReaderMode::kLexical ? "lexical" : "lexical+knowledge";
}

inline ReaderMode parse_reader_mode(std::string_view s) {
  if (s == "lexical") return ReaderMode::kLexical;
  if (s == "lexical+knowledge") return ReaderMode::kLexicalKnowledge;
  throw InvalidArgument("reader mode must be 'lexical' or 'lexical+knowledge', got '" +
                        std::string(s) + "'");
}

struct ReaderConfig {
  ReaderMode mode = ReaderMode::kLexical;
  double embedding_weight = 0.0;  // λ; the jaccard term gets weight 1−λ

  void validate() const {
    if (mode == ReaderMode::kLexical && embedding_weight != 0.0) {
      throw InvalidArgument("lexical mode requires embedding weight 0");
    }
    if (embedding_weight < 0.0 || embedding_weight > 1.0) {
      throw InvalidArgument("embedding weight must lie in [0, 1]");
    }
  }
};

/// Everything the knowledge term needs; unused (and may be empty) in
/// lexical mode.
struct ReaderResources {
  const EmbeddingTable* embeddings = nullptr;
  const KimParams* params = nullptr;
  const Lexicon* lexicon = nullptr;
  const WordVecs* word_vecs = nullptr;
};

namespace detail {

inline std::set<std::string> normalized_token_set(std::string_view text) {
  std::set<std::string> out;
  const std::string normalized = normalize_answer(text);
  for (const auto token : split_tokens(normalized)) out.emplace(token);
  return out;
}

inline double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t intersection = 0;
  for (const auto& x : a) intersection += b.count(x);
  const std::size_t unions = a.size() + b.size() - intersection;
  return static_cast<double>(intersection) / static_cast<double>(unions);
}

inline double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

/// Fused vectors at the first token of each linked mention. Mentions that
/// start mid-token (glued to punctuation) are skipped rather than rejected:
/// the reader must survive arbitrary note text.
inline std::vector<std::vector<double>> mention_vectors(std::string_view text,
                                                        const ReaderResources& res) {
  std::vector<EntityMention> mentions = link_entities(text, *res.lexicon);
  if (mentions.empty()) return {};
  const std::vector<Token> tokens = tokenize_with_offsets(text);

  std::vector<std::size_t> head_token;
  std::vector<EntityMention> aligned_mentions;
  for (auto& mention : mentions) {
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (tokens[i].start == mention.start) {
        head_token.push_back(i);
        aligned_mentions.push_back(std::move(mention));
        break;
      }
    }
  }
  if (aligned_mentions.empty()) return {};

  const auto entity_vecs =
      align_entities_to_tokens(tokens, aligned_mentions, *res.embeddings);
  std::vector<std::vector<double>> word_vecs(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto* v = res.word_vecs->find(tokens[i].text);
    word_vecs[i] = v != nullptr ? *v : std::vector<double>(res.word_vecs->dim, 0.0);
  }
  const auto fused = kim_fuse(word_vecs, entity_vecs, *res.params);

  std::vector<std::vector<double>> out;
  out.reserve(head_token.size());
  for (const std::size_t i : head_token) out.push_back(fused[i]);
  return out;
}

}  // namespace detail

/// Best-scoring trimmed line of the note for this question; ties go to the
/// earliest line. Throws when the note has no non-empty line, or when
/// knowledge mode lacks resources.
inline AnswerSpan predict_span(const std::string& question, const ClinicalNote& note,
                               const ReaderConfig& config,
                               const ReaderResources* resources = nullptr) {
  config.validate();
  const double lambda = config.embedding_weight;
  const bool use_knowledge =
      config.mode == ReaderMode::kLexicalKnowledge && lambda > 0.0;
  if (config.mode == ReaderMode::kLexicalKnowledge) {
    if (resources == nullptr || resources->embeddings == nullptr ||
        resources->params == nullptr || resources->lexicon == nullptr ||
        resources->word_vecs == nullptr) {
      throw InvalidArgument(
          "lexical+knowledge mode needs embeddings, fusion params, lexicon, and "
          "word vectors");
    }
    resources->params->validate();
    if (resources->params->entity_dim() != resources->embeddings->dim) {
      throw InvalidArgument("fusion entity dim does not match the embedding table");
    }
    if (resources->params->word_dim() != resources->word_vecs->dim) {
      throw InvalidArgument("fusion word dim does not match the word-vector table");
    }
  }

  const Utf8Index index(note.text);
  const std::set<std::string> q_tokens = detail::normalized_token_set(question);
  std::vector<std::vector<double>> q_mentions;
  if (use_knowledge) q_mentions = detail::mention_vectors(question, *resources);

  bool found = false;
  AnswerSpan best_span;
  double best_score = 0.0;
  for (const CharSpan line : note.lines) {
    AnswerSpan span = detail::trimmed_line_span(note, index, line);
    if (span.text.empty()) continue;

    double score =
        (1.0 - lambda) * detail::jaccard(q_tokens, detail::normalized_token_set(span.text));
    if (use_knowledge && !q_mentions.empty()) {
      double max_cos = 0.0;
      for (const auto& line_vec : detail::mention_vectors(span.text, *resources)) {
        for (const auto& q_vec : q_mentions) {
          max_cos = std::max(max_cos, detail::cosine(q_vec, line_vec));
        }
      }
      score += lambda * max_cos;
    }
    if (!found || score > best_score) {
      found = true;
      best_score = score;
      best_span = std::move(span);
    }
  }
  if (!found) {
    throw InvalidArgument("note '" + note.note_id + "' contains only empty lines");
  }
  return best_span;
}

/// Runs the reader over every question; returns the predictions mapping
/// consumed by evaluate_predictions.
inline std::map<std::string, std::string> predict_dataset(
    const Dataset& dataset, const ReaderConfig& config,
    const ReaderResources* resources = nullptr) {
  std::map<std::string, std::string> predictions;
  for (const auto& qa : dataset.qa_pairs) {
    const ClinicalNote* note = dataset.find_note(qa.note_id);
    if (note == nullptr) {
      throw IntegrityError("question '" + qa.question_id +
                           "' references unknown note_id '" + qa.note_id + "'");
    }
    predictions[qa.question_id] = predict_span(qa.question, *note, config, resources).text;
  }
  return predictions;
}

}  // namespace cliniqa
