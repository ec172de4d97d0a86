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

#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "cliniqa/augmentation.hpp"
#include "cliniqa/error.hpp"
#include "cliniqa/knowledge_base.hpp"
#include "cliniqa/linking.hpp"
#include "test_util.hpp"

using namespace cliniqa;

namespace {

KnowledgeBase fixture_kb() {
  return load_kb(testutil::fixture("kb_entities.json"),
                 testutil::fixture("kb_triples.tsv"));
}

Lexicon fixture_lexicon() { return load_lexicon(testutil::fixture("lexicon.tsv")); }

}  // namespace

TEST_CASE("load_kb reads entities and triples") {
  const KnowledgeBase kb = fixture_kb();
  CHECK(kb.entities.size() == 9);
  CHECK(kb.triples.size() == 3);
  REQUIRE(kb.find_entity("E1") != nullptr);
  CHECK(kb.find_entity("E1")->canonical == "Flagyl");
  CHECK(kb.find_entity("nope") == nullptr);
  // Relations in first-appearance order.
  CHECK(kb.relations() == std::vector<std::string>{"treats", "isa"});
}

TEST_CASE("KnowledgeBase::validate catches structural problems") {
  KnowledgeBase kb = fixture_kb();
  SECTION("duplicate entity id") {
    kb.entities.push_back(kb.entities[0]);
    CHECK_THROWS_AS(kb.validate(), IntegrityError);
  }
  SECTION("triple endpoint without an entity record") {
    kb.triples.push_back(Triple{"E1", "treats", "ghost"});
    CHECK_THROWS_AS(kb.validate(), IntegrityError);
  }
  SECTION("empty relation name") {
    kb.triples.push_back(Triple{"E1", "", "E5"});
    CHECK_THROWS_AS(kb.validate(), IntegrityError);
  }
}

TEST_CASE("lookup_synonyms excludes the canonical name and deduplicates") {
  const KnowledgeBase kb = fixture_kb();
  CHECK(lookup_synonyms(kb, "E1") == std::vector<std::string>{"Metronidazole"});
  // Alias "HCTZ" only differs from the canonical by case, so it is removed.
  CHECK(lookup_synonyms(kb, "E4") == std::vector<std::string>{"hydrochlorothiazide"});
  CHECK(lookup_synonyms(kb, "E5") ==
        std::vector<std::string>{"hypertension", "high blood pressure"});
  // "furosemide"/"Furosemide" collapse to the first spelling.
  CHECK(lookup_synonyms(kb, "E8") == std::vector<std::string>{"furosemide"});
  CHECK(lookup_synonyms(kb, "E2").empty());
  CHECK_THROWS_AS(lookup_synonyms(kb, "unknown"), InvalidArgument);
}

TEST_CASE("triple and lexicon loaders enforce their formats") {
  testutil::TempDir tmp;
  CHECK(load_triples(testutil::fixture("kb_triples.tsv")).size() == 3);

  testutil::write_file(tmp.file("bad.tsv"), "E1\ttreats\n");
  CHECK_THROWS_AS(load_triples(tmp.file("bad.tsv")), FormatError);

  testutil::write_file(tmp.file("comment.tsv"),
                       "# header comment\nE1\ttreats\tE5\n\nE5\tisa\tE7\n");
  CHECK(load_triples(tmp.file("comment.tsv")).size() == 2);

  const Lexicon lexicon = fixture_lexicon();
  CHECK(lexicon.size() == 10);
  CHECK(lexicon.at("flagyl") == "E1");

  testutil::write_file(tmp.file("conflict.tsv"), "aspirin\tE1\naspirin\tE2\n");
  CHECK_THROWS_AS(load_lexicon(tmp.file("conflict.tsv")), IntegrityError);

  testutil::write_file(tmp.file("mixedcase.tsv"), "Aspirin\tE1\naspirin\tE1\n");
  CHECK(load_lexicon(tmp.file("mixedcase.tsv")).size() == 1);  // same key, same id
}

TEST_CASE("lexicon_from_kb lowercases canonicals and aliases") {
  const KnowledgeBase kb = fixture_kb();
  const Lexicon lexicon = lexicon_from_kb(kb);
  CHECK(lexicon.at("flagyl") == "E1");
  CHECK(lexicon.at("metronidazole") == "E1");
  CHECK(lexicon.at("high blood pressure") == "E5");
  CHECK(lexicon.at("wrist ganglion") == "E3");

  KnowledgeBase clash;
  clash.entities = {EntityRecord{"A", "shared name", {}},
                    EntityRecord{"B", "Shared Name", {}}};
  CHECK(lexicon_from_kb(clash).at("shared name") == "A");  // first entity wins
}

TEST_CASE("link_entities prefers the longest boundary-respecting match") {
  const Lexicon lexicon = fixture_lexicon();

  SECTION("longest match wins") {
    const auto mentions = link_entities("Patient has a ganglion cyst today.", lexicon);
    REQUIRE(mentions.size() == 1);
    CHECK(mentions[0].surface == "ganglion cyst");
    CHECK(mentions[0].entity_id == "E3");
    CHECK(mentions[0].start == 14);
    CHECK(mentions[0].end == 27);
  }
  SECTION("scanning resumes after a match") {
    const auto mentions = link_entities("ganglion ganglion cyst", lexicon);
    REQUIRE(mentions.size() == 2);
    CHECK(mentions[0].entity_id == "E2");
    CHECK(mentions[1].entity_id == "E3");
  }
  SECTION("matching is case-insensitive but keeps the source casing") {
    const auto mentions = link_entities("Prescribed FLAGYL twice.", lexicon);
    REQUIRE(mentions.size() == 1);
    CHECK(mentions[0].surface == "FLAGYL");
    CHECK(mentions[0].entity_id == "E1");
  }
  SECTION("token boundaries are respected") {
    CHECK(link_entities("hypertensions", lexicon).empty());  // suffix glued on
    CHECK(link_entities("xhtn", lexicon).empty());           // prefix glued on
    const auto punct = link_entities("history of HTN.", lexicon);
    REQUIRE(punct.size() == 1);  // punctuation is a boundary
    CHECK(punct[0].entity_id == "E5");
  }
  SECTION("offsets are in code points") {
    const auto mentions = link_entities("café patient on lasix", lexicon);
    REQUIRE(mentions.size() == 1);
    CHECK(mentions[0].start == 16);
    CHECK(mentions[0].end == 21);
  }
  SECTION("no lexicon, no mentions") {
    CHECK(link_entities("anything at all", Lexicon{}).empty());
  }
}

TEST_CASE("augment_question substitutes a knowledge-base synonym") {
  const KnowledgeBase kb = fixture_kb();
  const Lexicon lexicon = fixture_lexicon();

  const QAPair qa{"q1", "Has this patient ever been on Flagyl?", "n1",
                  {}, "t1", "Flagyl"};
  const auto result = augment_question(qa, kb, lexicon, 42);
  REQUIRE(result.has_value());
  // E1 has exactly one synonym, so any seed produces the same rewrite.
  CHECK(result->qa.question == "Has this patient ever been on Metronidazole?");
  CHECK(result->qa.question_id == "q1");  // identity survives the rewrite
  CHECK(result->qa.entity_surface == "Metronidazole");
  CHECK(result->substitution ==
        Substitution{"q1", "Flagyl", "Metronidazole", "E1"});
}

TEST_CASE("augment_question draws uniformly among candidates") {
  const KnowledgeBase kb = fixture_kb();
  const Lexicon lexicon = fixture_lexicon();
  const QAPair qa{"q2", "Does the patient have hypertension?", "n1", {}, "t4",
                  "hypertension"};

  const auto first = augment_question(qa, kb, lexicon, 1);
  REQUIRE(first.has_value());
  const bool valid = first->qa.question == "Does the patient have hypertension?" ||
                     first->qa.question == "Does the patient have high blood pressure?";
  CHECK(valid);

  // Deterministic per seed.
  const auto again = augment_question(qa, kb, lexicon, 1);
  REQUIRE(again.has_value());
  CHECK(again->qa.question == first->qa.question);

  // Both candidates are reachable across seeds.
  bool saw_other = false;
  for (std::uint64_t seed = 0; seed < 64 && !saw_other; ++seed) {
    const auto r = augment_question(qa, kb, lexicon, seed);
    saw_other = r && r->qa.question != first->qa.question;
  }
  CHECK(saw_other);
}

TEST_CASE("augment_question filters questions without usable mentions") {
  const KnowledgeBase kb = fixture_kb();
  const Lexicon lexicon = fixture_lexicon();

  const QAPair unlinked{"q3", "Does the patient have diabetes mellitus?", "n1",
                        {}, "t4", std::nullopt};
  CHECK_FALSE(augment_question(unlinked, kb, lexicon, 1).has_value());

  // 'ganglion' links to E2, which has no synonyms.
  const QAPair no_synonyms{"q4", "Does the patient have a ganglion?", "n1",
                           {}, "t4", std::nullopt};
  CHECK_FALSE(augment_question(no_synonyms, kb, lexicon, 1).has_value());
}

TEST_CASE("augment_dataset keeps notes and records substitutions") {
  const KnowledgeBase kb = fixture_kb();
  const Lexicon lexicon = fixture_lexicon();

  Dataset ds;
  ds.notes.push_back(ClinicalNote::make("n1", "He was started on Flagyl today.\n"));
  ds.qa_pairs.push_back(QAPair{"q1", "Has this patient ever been on Flagyl?", "n1",
                               {AnswerSpan{"He was started on Flagyl today.", 0}},
                               "t1", "Flagyl"});
  ds.qa_pairs.push_back(QAPair{"q2", "Does the patient have diabetes mellitus?", "n1",
                               {AnswerSpan{"He was started on Flagyl today.", 0}},
                               "t4", std::nullopt});
  ds.qa_pairs.push_back(QAPair{"q3", "Was lasix restarted?", "n1",
                               {AnswerSpan{"He was started on Flagyl today.", 0}},
                               "t1", "lasix"});

  const auto [augmented, substitutions] = augment_dataset(ds, kb, lexicon, 9);
  CHECK(augmented.notes == ds.notes);
  REQUIRE(augmented.qa_pairs.size() == 2);  // q2 has no linkable mention
  CHECK(augmented.qa_pairs[0].question_id == "q1");
  CHECK(augmented.qa_pairs[1].question_id == "q3");
  CHECK(augmented.qa_pairs[1].question == "Was furosemide restarted?");
  REQUIRE(substitutions.size() == 2);
  CHECK(substitutions[0].question_id == "q1");
  CHECK(substitutions[1] == Substitution{"q3", "lasix", "furosemide", "E8"});
}
