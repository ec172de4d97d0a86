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

// Question augmentation: link entity mentions in a question, replace one
// seeded-uniformly-chosen mention with one of its KB synonyms, and drop
// questions with no replaceable mention. Answers and contexts are never
// modified.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cliniqa/dataset.hpp"
#include "cliniqa/knowledge_base.hpp"
#include "cliniqa/linking.hpp"
#include "cliniqa/rng.hpp"
#include "cliniqa/utf8.hpp"

namespace cliniqa {

/// Provenance record for one rewritten question.
struct Substitution {
  std::string question_id;
  std::string original;     // replaced mention surface, as it appeared
  std::string replacement;  // KB synonym written in its place
  std::string entity_id;

  bool operator==(const Substitution&) const = default;
};

struct AugmentedQuestion {
  QAPair qa;
  Substitution substitution;
};

/// Rewrites one question by substituting a single (mention, synonym) pair
/// chosen uniformly from all candidates with a stream derived from
/// (seed, question_id). Returns nothing when the question has no linked
/// mention with at least one synonym (the question is filtered out).
inline std::optional<AugmentedQuestion> augment_question(const QAPair& qa,
                                                         const KnowledgeBase& kb,
                                                         const Lexicon& lexicon,
                                                         std::uint64_t seed) {
  const std::vector<EntityMention> mentions = link_entities(qa.question, lexicon);

  struct Candidate {
    const EntityMention* mention;
    std::string synonym;
  };
  std::vector<Candidate> candidates;
  for (const auto& mention : mentions) {
    for (auto& synonym : lookup_synonyms(kb, mention.entity_id)) {
      candidates.push_back(Candidate{&mention, std::move(synonym)});
    }
  }
  if (candidates.empty()) return std::nullopt;

  Rng rng(derive_seed(seed, qa.question_id));
  const auto& pick = candidates[rng.below(candidates.size())];

  const Utf8Index index(qa.question);
  const std::size_t b0 = index.byte_of(pick.mention->start);
  const std::size_t b1 = index.byte_of(pick.mention->end);

  AugmentedQuestion out;
  out.qa = qa;
  out.qa.question =
      qa.question.substr(0, b0) + pick.synonym + qa.question.substr(b1);
  out.qa.entity_surface = pick.synonym;
  out.substitution = Substitution{qa.question_id, pick.mention->surface, pick.synonym,
                                  pick.mention->entity_id};
  return out;
}

/// Applies augment_question to every QA pair, keeping input order among the
/// retained questions. Notes pass through unchanged. Returns the rewritten
/// dataset and one substitution record per retained question.
inline std::pair<Dataset, std::vector<Substitution>> augment_dataset(
    const Dataset& dataset, const KnowledgeBase& kb, const Lexicon& lexicon,
    std::uint64_t seed) {
  Dataset out;
  out.notes = dataset.notes;
  std::vector<Substitution> substitutions;
  for (const auto& qa : dataset.qa_pairs) {
    if (auto augmented = augment_question(qa, kb, lexicon, seed)) {
      out.qa_pairs.push_back(std::move(augmented->qa));
      substitutions.push_back(std::move(augmented->substitution));
    }
  }
  return {std::move(out), std::move(substitutions)};
}

}  // namespace cliniqa
