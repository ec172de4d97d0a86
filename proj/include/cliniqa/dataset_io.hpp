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

// JSON interchange format, one file per corpus:
//
//   {"notes":    [{"note_id", "text"}, ...],
//    "qa_pairs": [{"question_id", "question", "note_id",
//                  "answers": [{"text", "answer_start"}, ...],
//                  "template_id"?, "entity_surface"?}, ...]}
//
// UTF-8 throughout; answer_start counts Unicode scalar values. Writing is
// byte-stable: fixed key order, fixed indentation, no timestamps.

#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cliniqa/dataset.hpp"
#include "cliniqa/error.hpp"

namespace cliniqa {

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (!in.good() && !in.eof()) throw IoError("error reading " + path.string());
  return buffer.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out.good()) throw IoError("error writing " + path.string());
}

inline nlohmann::ordered_json parse_json_file(const std::filesystem::path& path) {
  const std::string raw = read_file(path);
  try {
    return nlohmann::ordered_json::parse(raw);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

/// Integrity pass run on load: throws on the first violated structural
/// invariant, naming the offending record. The answer-length filter is a
/// policy parameter and is checked by validate_dataset instead.
inline void check_dataset_integrity(const Dataset& dataset) {
  std::map<std::string_view, const ClinicalNote*> by_id;
  for (const auto& note : dataset.notes) {
    if (!by_id.emplace(note.note_id, &note).second) {
      throw IntegrityError("duplicate note_id '" + note.note_id + "'");
    }
  }
  for (const auto& qa : dataset.qa_pairs) {
    if (qa.question.empty()) {
      throw IntegrityError("qa '" + qa.question_id + "': question is empty");
    }
    if (qa.answers.empty()) {
      throw IntegrityError("qa '" + qa.question_id + "': answer list is empty");
    }
    const auto it = by_id.find(qa.note_id);
    if (it == by_id.end()) {
      throw IntegrityError("qa '" + qa.question_id + "': unknown note_id '" +
                           qa.note_id + "'");
    }
    const Utf8Index index(it->second->text);
    for (const auto& answer : qa.answers) {
      if (auto problem = check_answer_span(*it->second, index, answer)) {
        throw IntegrityError("qa '" + qa.question_id + "': " + *problem);
      }
    }
  }
}

}  // namespace detail

inline nlohmann::ordered_json dataset_to_json(const Dataset& dataset) {
  nlohmann::ordered_json root;
  root["notes"] = nlohmann::ordered_json::array();
  for (const auto& note : dataset.notes) {
    root["notes"].push_back({{"note_id", note.note_id}, {"text", note.text}});
  }
  root["qa_pairs"] = nlohmann::ordered_json::array();
  for (const auto& qa : dataset.qa_pairs) {
    nlohmann::ordered_json j;
    j["question_id"] = qa.question_id;
    j["question"] = qa.question;
    j["note_id"] = qa.note_id;
    j["answers"] = nlohmann::ordered_json::array();
    for (const auto& answer : qa.answers) {
      j["answers"].push_back(
          {{"text", answer.text}, {"answer_start", answer.answer_start}});
    }
    if (qa.template_id) j["template_id"] = *qa.template_id;
    if (qa.entity_surface) j["entity_surface"] = *qa.entity_surface;
    root["qa_pairs"].push_back(std::move(j));
  }
  return root;
}

inline Dataset dataset_from_json(const nlohmann::ordered_json& root,
                                 const std::string& origin) {
  try {
    Dataset dataset;
    if (!root.is_object() || !root.contains("notes")) {
      throw FormatError(origin + ": expected an object with a 'notes' array");
    }
    for (const auto& j : root.at("notes")) {
      dataset.notes.push_back(ClinicalNote::make(j.at("note_id").get<std::string>(),
                                                 j.at("text").get<std::string>()));
    }
    if (root.contains("qa_pairs")) {
      for (const auto& j : root.at("qa_pairs")) {
        QAPair qa;
        qa.question_id = j.at("question_id").get<std::string>();
        qa.question = j.at("question").get<std::string>();
        qa.note_id = j.at("note_id").get<std::string>();
        for (const auto& a : j.at("answers")) {
          qa.answers.push_back(AnswerSpan{a.at("text").get<std::string>(),
                                          a.at("answer_start").get<std::size_t>()});
        }
        if (j.contains("template_id") && !j.at("template_id").is_null()) {
          qa.template_id = j.at("template_id").get<std::string>();
        }
        if (j.contains("entity_surface") && !j.at("entity_surface").is_null()) {
          qa.entity_surface = j.at("entity_surface").get<std::string>();
        }
        dataset.qa_pairs.push_back(std::move(qa));
      }
    }
    return dataset;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(origin + ": " + e.what());
  }
}

/// Loads a corpus file and verifies every structural invariant. Throws
/// IoError / FormatError / IntegrityError.
inline Dataset load_dataset(const std::filesystem::path& path) {
  Dataset dataset = dataset_from_json(detail::parse_json_file(path), path.string());
  detail::check_dataset_integrity(dataset);
  return dataset;
}

/// Writes the corpus; byte-identical output for identical input.
inline void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  detail::write_file(path, dataset_to_json(dataset).dump(2) + "\n");
}

}  // namespace cliniqa
