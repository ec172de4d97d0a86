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

// Extractive-QA scoring with the classic normalization rules: lowercase,
// delete ASCII punctuation, drop the standalone articles a/an/the, collapse
// whitespace. Exact match and token-multiset F1 are taken as the max over
// gold answers; aggregates are means over questions, reported as
// percentages. Also: easy/hard partitioning of question templates by mean
// score.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cliniqa/dataset.hpp"
#include "cliniqa/dataset_io.hpp"
#include "cliniqa/error.hpp"
#include "cliniqa/text.hpp"

namespace cliniqa {

namespace detail {

/// The 32 ASCII punctuation characters: !"#$%&'()*+,-./:;<=>?@[\]^_`{|}~
inline bool is_ascii_punct(char c) {
  const auto u = static_cast<unsigned char>(c);
  return (u >= 0x21 && u <= 0x2F) || (u >= 0x3A && u <= 0x40) ||
         (u >= 0x5B && u <= 0x60) || (u >= 0x7B && u <= 0x7E);
}

}  // namespace detail

/// Canonical answer form: ASCII lowercase, punctuation characters deleted,
/// standalone articles a/an/the removed, whitespace collapsed to single
/// spaces. Idempotent; non-ASCII bytes pass through untouched.
inline std::string normalize_answer(std::string_view text) {
  std::string cleaned;
  cleaned.reserve(text.size());
  for (char c : text) {
    c = to_lower_ascii(c);
    if (!detail::is_ascii_punct(c)) cleaned.push_back(c);
  }
  std::string out;
  for (const auto token : split_tokens(cleaned)) {
    if (token == "a" || token == "an" || token == "the") continue;
    if (!out.empty()) out.push_back(' ');
    out.append(token);
  }
  return out;
}

/// 1 if the normalized prediction equals any normalized gold, else 0.
inline int exact_match_score(std::string_view prediction,
                             const std::vector<std::string>& golds) {
  if (golds.empty()) {
    throw InvalidArgument("exact_match_score requires at least one gold answer");
  }
  const std::string norm_pred = normalize_answer(prediction);
  for (const auto& gold : golds) {
    if (normalize_answer(gold) == norm_pred) return 1;
  }
  return 0;
}

/// Token-multiset F1 (2·overlap / (|pred| + |gold|)) after normalization,
/// maxed over golds. Both sides empty after normalization → 1; exactly one
/// empty → 0.
inline double token_f1_score(std::string_view prediction,
                             const std::vector<std::string>& golds) {
  if (golds.empty()) {
    throw InvalidArgument("token_f1_score requires at least one gold answer");
  }
  const std::string norm_pred = normalize_answer(prediction);
  const std::vector<std::string_view> pred_tokens = split_tokens(norm_pred);

  double best = 0.0;
  for (const auto& gold : golds) {
    const std::string norm_gold = normalize_answer(gold);
    const std::vector<std::string_view> gold_tokens = split_tokens(norm_gold);
    if (pred_tokens.empty() || gold_tokens.empty()) {
      if (pred_tokens.empty() && gold_tokens.empty()) best = std::max(best, 1.0);
      continue;
    }
    std::map<std::string_view, std::size_t> remaining;
    for (const auto t : gold_tokens) ++remaining[t];
    std::size_t overlap = 0;
    for (const auto t : pred_tokens) {
      const auto it = remaining.find(t);
      if (it != remaining.end() && it->second > 0) {
        --it->second;
        ++overlap;
      }
    }
    if (overlap > 0) {
      best = std::max(best, 2.0 * static_cast<double>(overlap) /
                                static_cast<double>(pred_tokens.size() +
                                                    gold_tokens.size()));
    }
  }
  return best;
}

struct QuestionScore {
  double em = 0.0;  // 0 or 1
  double f1 = 0.0;  // [0, 1]

  bool operator==(const QuestionScore&) const = default;
};

struct EvalReport {
  double exact_match = 0.0;  // percentage
  double f1 = 0.0;           // percentage
  std::size_t n_evaluated = 0;
  std::map<std::string, QuestionScore> per_question;

  bool operator==(const EvalReport&) const = default;
};

/// Scores every dataset question against its prediction. Every question_id
/// in the dataset must have a prediction (extras are ignored). Feeding one
/// annotation set's answers as "predictions" against another's golds turns
/// this into an annotation-agreement measure.
inline EvalReport evaluate_predictions(const std::map<std::string, std::string>& predictions,
                                       const Dataset& dataset) {
  if (dataset.qa_pairs.empty()) {
    throw InvalidArgument("dataset has no questions to evaluate");
  }
  EvalReport report;
  double em_sum = 0.0;
  double f1_sum = 0.0;
  for (const auto& qa : dataset.qa_pairs) {
    const auto it = predictions.find(qa.question_id);
    if (it == predictions.end()) {
      throw InvalidArgument("no prediction for question '" + qa.question_id + "'");
    }
    std::vector<std::string> golds;
    golds.reserve(qa.answers.size());
    for (const auto& a : qa.answers) golds.push_back(a.text);
    QuestionScore score;
    score.em = exact_match_score(it->second, golds);
    score.f1 = token_f1_score(it->second, golds);
    em_sum += score.em;
    f1_sum += score.f1;
    report.per_question[qa.question_id] = score;
  }
  report.n_evaluated = dataset.qa_pairs.size();
  report.exact_match = 100.0 * em_sum / static_cast<double>(report.n_evaluated);
  report.f1 = 100.0 * f1_sum / static_cast<double>(report.n_evaluated);
  return report;
}

// ---------------------------------------------------------------------------
// Easy/hard template partition.
// ---------------------------------------------------------------------------

enum class Difficulty { kEasy, kHard };

inline const char* difficulty_name(Difficulty d) {
  return d == Difficulty::kEasy ? "easy" : "hard";
}

/// Labels a template Easy iff the mean score of its questions strictly
/// exceeds the mean over all questions; ties are Hard. Every scored
/// question must have a template.
inline std::map<std::string, Difficulty> partition_difficulty(
    const std::map<std::string, double>& scores,
    const std::map<std::string, std::string>& template_of) {
  if (scores.empty()) {
    throw InvalidArgument("cannot partition difficulty with no scores");
  }
  struct Accum {
    double sum = 0.0;
    std::size_t n = 0;
  };
  std::map<std::string, Accum> per_template;
  double overall_sum = 0.0;
  for (const auto& [question_id, score] : scores) {
    const auto it = template_of.find(question_id);
    if (it == template_of.end()) {
      throw InvalidArgument("question '" + question_id + "' has no template");
    }
    auto& acc = per_template[it->second];
    acc.sum += score;
    acc.n += 1;
    overall_sum += score;
  }
  const double overall = overall_sum / static_cast<double>(scores.size());

  std::map<std::string, Difficulty> out;
  for (const auto& [template_id, acc] : per_template) {
    const double mean = acc.sum / static_cast<double>(acc.n);
    out[template_id] = mean > overall ? Difficulty::kEasy : Difficulty::kHard;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Files: predictions JSON, report JSON, score CSV, difficulty JSON.
// ---------------------------------------------------------------------------

/// Predictions file: one JSON object mapping question_id → answer string.
inline std::map<std::string, std::string> load_predictions(
    const std::filesystem::path& path) {
  const auto root = detail::parse_json_file(path);
  if (!root.is_object()) {
    throw FormatError(path.string() + ": predictions must be a JSON object");
  }
  try {
    std::map<std::string, std::string> out;
    for (const auto& [key, value] : root.items()) {
      out[key] = value.get<std::string>();
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

inline void save_predictions(const std::map<std::string, std::string>& predictions,
                             const std::filesystem::path& path) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [question_id, text] : predictions) j[question_id] = text;
  detail::write_file(path, j.dump(2) + "\n");
}

inline nlohmann::ordered_json report_to_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["exact_match"] = report.exact_match;
  j["f1"] = report.f1;
  j["n_evaluated"] = report.n_evaluated;
  nlohmann::ordered_json per_question = nlohmann::ordered_json::object();
  for (const auto& [question_id, score] : report.per_question) {
    per_question[question_id] = {{"em", score.em}, {"f1", score.f1}};
  }
  j["per_question"] = std::move(per_question);
  return j;
}

inline void save_report(const EvalReport& report, const std::filesystem::path& path) {
  detail::write_file(path, report_to_json(report).dump(2) + "\n");
}

/// Score file: CSV with a `question_id,score` header row.
inline std::map<std::string, double> load_scores_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open score file: " + path.string());
  std::string line;
  if (!std::getline(in, line)) {
    throw FormatError(path.string() + ": empty score file");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (trim(line) != "question_id,score") {
    throw FormatError(path.string() + ": first line must be 'question_id,score'");
  }
  std::map<std::string, double> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const std::size_t comma = line.rfind(',');
    if (comma == std::string::npos || comma == 0) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) +
                        ": expected question_id,score");
    }
    const std::string question_id = line.substr(0, comma);
    const std::string cell = line.substr(comma + 1);
    char* end = nullptr;
    const double score = std::strtod(cell.c_str(), &end);
    if (cell.empty() || end != cell.c_str() + cell.size() || !std::isfinite(score)) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) +
                        ": bad score '" + cell + "'");
    }
    if (!out.emplace(question_id, score).second) {
      throw IntegrityError(path.string() + ":" + std::to_string(line_no) +
                           ": duplicate question_id '" + question_id + "'");
    }
  }
  return out;
}

inline void save_scores_csv(const std::map<std::string, double>& scores,
                            const std::filesystem::path& path) {
  std::string out = "question_id,score\n";
  for (const auto& [question_id, score] : scores) {
    out += question_id;
    out += ',';
    out += fmt_double(score);
    out += '\n';
  }
  detail::write_file(path, out);
}

inline void save_difficulty(const std::map<std::string, Difficulty>& labels,
                            const std::filesystem::path& path) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [template_id, label] : labels) j[template_id] = difficulty_name(label);
  detail::write_file(path, j.dump(2) + "\n");
}

}  // namespace cliniqa
