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

// Command-line front end. Every subcommand reads files, runs one library
// operation, writes files, and drops a manifest (tool version, config,
// seed, input hashes, output paths) beside its outputs so any run can be
// replayed byte-for-byte. Diagnostics go to stderr; exit code 0 = success,
// 1 = data error, 2 = usage error.

#include <array>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cliniqa/cliniqa.hpp"

namespace {

namespace fs = std::filesystem;

std::vector<double> parse_ratio_list(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string cell =
        text.substr(start, comma == std::string::npos ? std::string::npos
                                                      : comma - start);
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw cliniqa::InvalidArgument("bad ratio '" + cell + "' in '" + text + "'");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

/// Lowercased whitespace vocabulary of a dataset: question and note text.
std::vector<std::string> dataset_vocabulary(const cliniqa::Dataset& dataset) {
  std::set<std::string> vocab;
  for (const auto& qa : dataset.qa_pairs) {
    for (const auto tok : cliniqa::split_tokens(qa.question)) {
      vocab.insert(cliniqa::to_lower_ascii(tok));
    }
  }
  for (const auto& note : dataset.notes) {
    for (const auto tok : cliniqa::split_tokens(note.text)) {
      vocab.insert(cliniqa::to_lower_ascii(tok));
    }
  }
  return {vocab.begin(), vocab.end()};
}

// ---------------------------------------------------------------------------
// generate
// ---------------------------------------------------------------------------

struct GenerateOpts {
  std::string notes_path;
  std::string templates_path;
  std::string annotations_path;
  std::string out_path;
  std::size_t max_answer_tokens = 20;
  std::uint64_t seed = 0;
};

void run_generate(const GenerateOpts& opt) {
  const cliniqa::Dataset notes_file = cliniqa::load_dataset(opt.notes_path);
  const auto templates = cliniqa::load_templates(opt.templates_path);
  const auto annotations = cliniqa::load_annotations(opt.annotations_path);

  const cliniqa::Dataset dataset = cliniqa::generate_dataset(
      notes_file.notes, templates, annotations, opt.max_answer_tokens);
  cliniqa::save_dataset(dataset, opt.out_path);

  cliniqa::RunManifest manifest;
  manifest.subcommand = "generate";
  manifest.seed = opt.seed;
  manifest.add_config("max_answer_tokens", std::to_string(opt.max_answer_tokens));
  manifest.add_input(opt.notes_path);
  manifest.add_input(opt.templates_path);
  manifest.add_input(opt.annotations_path);
  manifest.add_output(opt.out_path);
  cliniqa::write_manifest(manifest, cliniqa::manifest_path_for(opt.out_path));

  std::cerr << "generate: " << dataset.qa_pairs.size() << " questions over "
            << dataset.notes.size() << " notes -> " << opt.out_path << "\n";
}

// ---------------------------------------------------------------------------
// split
// ---------------------------------------------------------------------------

struct SplitOpts {
  std::string in_path;
  std::string ratios = "0.7,0.1,0.2";
  std::string out_dir;
  std::uint64_t seed = 0;
};

void run_split(const SplitOpts& opt) {
  const auto ratios = parse_ratio_list(opt.ratios);
  if (ratios.size() != 3) {
    throw cliniqa::InvalidArgument("--ratios needs exactly 3 comma-separated values");
  }
  const cliniqa::Dataset dataset = cliniqa::load_dataset(opt.in_path);
  const auto parts = cliniqa::split_by_documents(
      dataset, cliniqa::SplitRatios{ratios[0], ratios[1], ratios[2]}, opt.seed);

  fs::create_directories(opt.out_dir);
  const std::array<std::string, 3> names = {"train.json", "dev.json", "test.json"};
  cliniqa::RunManifest manifest;
  manifest.subcommand = "split";
  manifest.seed = opt.seed;
  manifest.add_config("ratios", opt.ratios);
  manifest.add_input(opt.in_path);
  for (std::size_t i = 0; i < 3; ++i) {
    const fs::path out = fs::path(opt.out_dir) / names[i];
    cliniqa::save_dataset(parts[i], out);
    manifest.add_output(out);
  }
  cliniqa::write_manifest(manifest, fs::path(opt.out_dir) / "split.manifest.json");

  std::cerr << "split: " << parts[0].notes.size() << "/" << parts[1].notes.size() << "/"
            << parts[2].notes.size() << " notes, " << parts[0].qa_pairs.size() << "/"
            << parts[1].qa_pairs.size() << "/" << parts[2].qa_pairs.size()
            << " questions -> " << opt.out_dir << "\n";
}

// ---------------------------------------------------------------------------
// sample
// ---------------------------------------------------------------------------

struct SampleOpts {
  std::string in_path;
  std::string out_path;
  double rate = 1.0;
  std::uint64_t seed = 0;
};

void run_sample(const SampleOpts& opt) {
  const cliniqa::Dataset dataset = cliniqa::load_dataset(opt.in_path);
  const cliniqa::Dataset sampled = cliniqa::sample_questions(dataset, opt.rate, opt.seed);
  cliniqa::save_dataset(sampled, opt.out_path);

  cliniqa::RunManifest manifest;
  manifest.subcommand = "sample";
  manifest.seed = opt.seed;
  manifest.add_config("rate", cliniqa::fmt_double(opt.rate));
  manifest.add_input(opt.in_path);
  manifest.add_output(opt.out_path);
  cliniqa::write_manifest(manifest, cliniqa::manifest_path_for(opt.out_path));

  std::cerr << "sample: kept " << sampled.qa_pairs.size() << " of "
            << dataset.qa_pairs.size() << " questions -> " << opt.out_path << "\n";
}

// ---------------------------------------------------------------------------
// segment
// ---------------------------------------------------------------------------

struct SegmentOpts {
  std::string in_path;
  std::string out_path;
  std::string lexicon_path;  // optional; built-in list when empty
};

void run_segment(const SegmentOpts& opt) {
  const cliniqa::Dataset dataset = cliniqa::load_dataset(opt.in_path);
  std::vector<std::string> lexicon;
  if (!opt.lexicon_path.empty()) {
    lexicon = cliniqa::load_header_lexicon(opt.lexicon_path);
  } else {
    lexicon.assign(cliniqa::kDefaultHeaderLexicon.begin(),
                   cliniqa::kDefaultHeaderLexicon.end());
  }

  nlohmann::ordered_json root = nlohmann::ordered_json::object();
  std::size_t total_sections = 0;
  for (const auto& note : dataset.notes) {
    const auto sections =
        cliniqa::segment_note(note, cliniqa::detect_headers(note, lexicon));
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& s : sections) {
      nlohmann::ordered_json j;
      j["header"] = s.header.has_value() ? nlohmann::ordered_json(*s.header)
                                         : nlohmann::ordered_json(nullptr);
      j["start"] = s.start;
      j["end"] = s.end;
      arr.push_back(std::move(j));
    }
    total_sections += sections.size();
    root[note.note_id] = std::move(arr);
  }
  cliniqa::detail::write_file(opt.out_path, root.dump(2) + "\n");

  cliniqa::RunManifest manifest;
  manifest.subcommand = "segment";
  manifest.add_config("lexicon",
                      opt.lexicon_path.empty() ? "<built-in>" : opt.lexicon_path);
  manifest.add_input(opt.in_path);
  if (!opt.lexicon_path.empty()) manifest.add_input(opt.lexicon_path);
  manifest.add_output(opt.out_path);
  cliniqa::write_manifest(manifest, cliniqa::manifest_path_for(opt.out_path));

  std::cerr << "segment: " << total_sections << " sections over "
            << dataset.notes.size() << " notes -> " << opt.out_path << "\n";
}

// ---------------------------------------------------------------------------
// augment
// ---------------------------------------------------------------------------

struct AugmentOpts {
  std::string in_path;
  std::string entities_path;
  std::string triples_path;
  std::string lexicon_path;  // optional; derived from the KB when empty
  std::string out_path;
  std::string substitutions_path;  // optional provenance log
  std::uint64_t seed = 0;
};

void run_augment(const AugmentOpts& opt) {
  const cliniqa::Dataset dataset = cliniqa::load_dataset(opt.in_path);
  const cliniqa::KnowledgeBase kb =
      cliniqa::load_kb(opt.entities_path, opt.triples_path);
  const cliniqa::Lexicon lexicon = opt.lexicon_path.empty()
                                       ? cliniqa::lexicon_from_kb(kb)
                                       : cliniqa::load_lexicon(opt.lexicon_path);

  const auto [augmented, substitutions] =
      cliniqa::augment_dataset(dataset, kb, lexicon, opt.seed);
  cliniqa::save_dataset(augmented, opt.out_path);
  if (!opt.substitutions_path.empty()) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& s : substitutions) {
      arr.push_back({{"question_id", s.question_id},
                     {"original", s.original},
                     {"replacement", s.replacement},
                     {"entity_id", s.entity_id}});
    }
    cliniqa::detail::write_file(opt.substitutions_path, arr.dump(2) + "\n");
  }

  cliniqa::RunManifest manifest;
  manifest.subcommand = "augment";
  manifest.seed = opt.seed;
  manifest.add_config("lexicon",
                      opt.lexicon_path.empty() ? "<from-kb>" : opt.lexicon_path);
  manifest.add_input(opt.in_path);
  manifest.add_input(opt.entities_path);
  manifest.add_input(opt.triples_path);
  if (!opt.lexicon_path.empty()) manifest.add_input(opt.lexicon_path);
  manifest.add_output(opt.out_path);
  if (!opt.substitutions_path.empty()) manifest.add_output(opt.substitutions_path);
  cliniqa::write_manifest(manifest, cliniqa::manifest_path_for(opt.out_path));

  std::cerr << "augment: rewrote " << augmented.qa_pairs.size() << " of "
            << dataset.qa_pairs.size() << " questions (filtered "
            << dataset.qa_pairs.size() - augmented.qa_pairs.size() << ") -> "
            << opt.out_path << "\n";
}

// ---------------------------------------------------------------------------
// kge-train
// ---------------------------------------------------------------------------

struct KgeTrainOpts {
  std::string triples_path;
  std::string entities_path;
  std::string out_entities;
  std::string out_relations;
  std::string loss_path;           // optional
  std::string init_entities_path;  // optional, with init_relations_path
  std::string init_relations_path;
  cliniqa::TransEConfig config;
  std::string norm = "L2";
};

void run_kge_train(const KgeTrainOpts& opt) {
  const auto triples = cliniqa::load_triples(opt.triples_path);
  const auto entities = cliniqa::load_entities(opt.entities_path);
  std::vector<std::string> entity_ids;
  entity_ids.reserve(entities.size());
  for (const auto& e : entities) entity_ids.push_back(e.entity_id);

  cliniqa::TransEConfig config = opt.config;
  config.norm = cliniqa::parse_norm(opt.norm);

  std::optional<cliniqa::EmbeddingTable> init;
  if (!opt.init_entities_path.empty() || !opt.init_relations_path.empty()) {
    if (opt.init_entities_path.empty() || opt.init_relations_path.empty()) {
      throw cliniqa::InvalidArgument(
          "--init-entities and --init-relations must be given together");
    }
    init = cliniqa::load_embedding_table(opt.init_entities_path,
                                         opt.init_relations_path);
  }

  const cliniqa::TrainResult result = cliniqa::train_transe(
      triples, entity_ids, config, init ? &*init : nullptr);
  cliniqa::save_embedding_table(result.table, opt.out_entities, opt.out_relations);
  if (!opt.loss_path.empty()) {
    cliniqa::save_loss_trace(opt.loss_path, result.epoch_losses);
  }

  cliniqa::RunManifest manifest;
  manifest.subcommand = "kge-train";
  manifest.seed = config.seed;
  manifest.add_config("dim", std::to_string(config.dim));
  manifest.add_config("margin", cliniqa::fmt_double(config.margin));
  manifest.add_config("learning_rate", cliniqa::fmt_double(config.learning_rate));
  manifest.add_config("epochs", std::to_string(config.epochs));
  manifest.add_config("batch_size", std::to_string(config.batch_size));
  manifest.add_config("norm", cliniqa::norm_name(config.norm));
  manifest.add_input(opt.triples_path);
  manifest.add_input(opt.entities_path);
  if (init) {
    manifest.add_input(opt.init_entities_path);
    manifest.add_input(opt.init_relations_path);
  }
  manifest.add_output(opt.out_entities);
  manifest.add_output(opt.out_relations);
  if (!opt.loss_path.empty()) manifest.add_output(opt.loss_path);
  cliniqa::write_manifest(manifest, cliniqa::manifest_path_for(opt.out_entities));

  std::cerr << "kge-train: " << triples.size() << " triples, "
            << entity_ids.size() << " entities, " << config.epochs << " epochs";
  if (!result.epoch_losses.empty()) {
    std::cerr << ", loss " << result.epoch_losses.front() << " -> "
              << result.epoch_losses.back();
  }
  std::cerr << "\n";
}

// ---------------------------------------------------------------------------
// fuse
// ---------------------------------------------------------------------------

struct FuseOpts {
  std::string in_path;  // plain text, one passage per line
  std::string entity_embeddings_path;
  std::string relation_embeddings_path;
  std::string lexicon_path;
  std::string params_path;
  std::string word_vecs_path;  // or random vectors via word_dim + seed
  std::size_t word_dim = 0;
  std::optional<std::uint64_t> seed;
  std::string out_path;
};

void run_fuse(const FuseOpts& opt) {
  const std::string text = cliniqa::detail::read_file(opt.in_path);
  std::vector<std::string> passages;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t nl = text.find('\n', start);
    if (nl == std::string::npos) {
      if (start < text.size()) passages.push_back(text.substr(start));
      break;
    }
    passages.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }

  const cliniqa::EmbeddingTable emb = cliniqa::load_embedding_table(
      opt.entity_embeddings_path, opt.relation_embeddings_path);
  const cliniqa::Lexicon lexicon = cliniqa::load_lexicon(opt.lexicon_path);
  const cliniqa::KimParams params = cliniqa::load_kim_params(opt.params_path);

  cliniqa::WordVecs words;
  if (!opt.word_vecs_path.empty()) {
    words = cliniqa::load_word_vecs(opt.word_vecs_path);
  } else {
    if (opt.word_dim == 0 || !opt.seed.has_value()) {
      throw cliniqa::InvalidArgument(
          "either --word-vecs or both --word-dim and --seed are required");
    }
    std::set<std::string> vocab;
    for (const auto& passage : passages) {
      for (const auto tok : cliniqa::split_tokens(passage)) {
        vocab.insert(cliniqa::to_lower_ascii(tok));
      }
    }
    words = cliniqa::random_word_vecs({vocab.begin(), vocab.end()}, opt.word_dim,
                                      *opt.seed);
  }

  std::string out = "# dim=" + std::to_string(params.out_dim()) + "\n";
  for (std::size_t p = 0; p < passages.size(); ++p) {
    const auto tokens = cliniqa::tokenize_with_offsets(passages[p]);
    const auto mentions = cliniqa::link_entities(passages[p], lexicon);
    const auto entity_vecs = cliniqa::align_entities_to_tokens(tokens, mentions, emb);
    std::vector<std::vector<double>> word_vecs(tokens.size());
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const auto* v = words.find(tokens[i].text);
      word_vecs[i] = v != nullptr ? *v : std::vector<double>(words.dim, 0.0);
    }
    const auto fused = cliniqa::kim_fuse(word_vecs, entity_vecs, params);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      out += std::to_string(p);
      out += '\t';
      out += std::to_string(i);
      out += '\t';
      out += tokens[i].text;
      for (const double x : fused[i]) {
        out += '\t';
        out += cliniqa::fmt_double(x);
      }
      out += '\n';
    }
  }
  cliniqa::detail::write_file(opt.out_path, out);

  cliniqa::RunManifest manifest;
  manifest.subcommand = "fuse";
  manifest.seed = opt.seed;
  if (opt.word_vecs_path.empty()) {
    manifest.add_config("word_dim", std::to_string(opt.word_dim));
  }
  manifest.add_input(opt.in_path);
  manifest.add_input(opt.entity_embeddings_path);
  manifest.add_input(opt.relation_embeddings_path);
  manifest.add_input(opt.lexicon_path);
  manifest.add_input(opt.params_path);
  if (!opt.word_vecs_path.empty()) manifest.add_input(opt.word_vecs_path);
  manifest.add_output(opt.out_path);
  cliniqa::write_manifest(manifest, cliniqa::manifest_path_for(opt.out_path));

  std::cerr << "fuse: " << passages.size() << " passages -> " << opt.out_path << "\n";
}

// ---------------------------------------------------------------------------
// read
// ---------------------------------------------------------------------------

struct ReadOpts {
  std::string in_path;
  std::string out_path;
  std::string mode = "lexical";
  double lambda = 0.0;
  std::string entity_embeddings_path;
  std::string relation_embeddings_path;
  std::string lexicon_path;
  std::string params_path;
  std::string word_vecs_path;
  std::size_t word_dim = 0;
  std::optional<std::uint64_t> seed;
};

void run_read(const ReadOpts& opt) {
  const cliniqa::Dataset dataset = cliniqa::load_dataset(opt.in_path);
  cliniqa::ReaderConfig config;
  config.mode = cliniqa::parse_reader_mode(opt.mode);
  config.embedding_weight = opt.lambda;
  config.validate();

  cliniqa::EmbeddingTable emb;
  cliniqa::KimParams params;
  cliniqa::Lexicon lexicon;
  cliniqa::WordVecs words;
  cliniqa::ReaderResources resources;
  const cliniqa::ReaderResources* resources_ptr = nullptr;

  if (config.mode == cliniqa::ReaderMode::kLexicalKnowledge) {
    if (opt.entity_embeddings_path.empty() || opt.relation_embeddings_path.empty() ||
        opt.lexicon_path.empty() || opt.params_path.empty()) {
      throw cliniqa::InvalidArgument(
          "lexical+knowledge mode requires --entity-embeddings, "
          "--relation-embeddings, --lexicon, and --params");
    }
    emb = cliniqa::load_embedding_table(opt.entity_embeddings_path,
                                        opt.relation_embeddings_path);
    params = cliniqa::load_kim_params(opt.params_path);
    lexicon = cliniqa::load_lexicon(opt.lexicon_path);
    if (!opt.word_vecs_path.empty()) {
      words = cliniqa::load_word_vecs(opt.word_vecs_path);
    } else {
      if (opt.word_dim == 0 || !opt.seed.has_value()) {
        throw cliniqa::InvalidArgument(
            "either --word-vecs or both --word-dim and --seed are required in "
            "lexical+knowledge mode");
      }
      words = cliniqa::random_word_vecs(dataset_vocabulary(dataset), opt.word_dim,
                                        *opt.seed);
    }
    resources.embeddings = &emb;
    resources.params = &params;
    resources.lexicon = &lexicon;
    resources.word_vecs = &words;
    resources_ptr = &resources;
  }

  const auto predictions = cliniqa::predict_dataset(dataset, config, resources_ptr);
  cliniqa::save_predictions(predictions, opt.out_path);

  cliniqa::RunManifest manifest;
  manifest.subcommand = "read";
  manifest.seed = opt.seed;
  manifest.add_config("mode", opt.mode);
  manifest.add_config("lambda", cliniqa::fmt_double(opt.lambda));
  manifest.add_input(opt.in_path);
  if (resources_ptr != nullptr) {
    manifest.add_input(opt.entity_embeddings_path);
    manifest.add_input(opt.relation_embeddings_path);
    manifest.add_input(opt.lexicon_path);
    manifest.add_input(opt.params_path);
    if (!opt.word_vecs_path.empty()) {
      manifest.add_input(opt.word_vecs_path);
    } else {
      manifest.add_config("word_dim", std::to_string(opt.word_dim));
    }
  }
  manifest.add_output(opt.out_path);
  cliniqa::write_manifest(manifest, cliniqa::manifest_path_for(opt.out_path));

  std::cerr << "read: " << predictions.size() << " predictions (" << opt.mode
            << ") -> " << opt.out_path << "\n";
}

// ---------------------------------------------------------------------------
// evaluate
// ---------------------------------------------------------------------------

struct EvaluateOpts {
  std::string pred_path;
  std::string gold_path;
  std::string out_path;
  std::string scores_path;  // optional per-question F1 CSV
};

void run_evaluate(const EvaluateOpts& opt) {
  const auto predictions = cliniqa::load_predictions(opt.pred_path);
  const cliniqa::Dataset dataset = cliniqa::load_dataset(opt.gold_path);
  const cliniqa::EvalReport report = cliniqa::evaluate_predictions(predictions, dataset);
  cliniqa::save_report(report, opt.out_path);
  if (!opt.scores_path.empty()) {
    std::map<std::string, double> scores;
    for (const auto& [question_id, s] : report.per_question) {
      scores[question_id] = s.f1;
    }
    cliniqa::save_scores_csv(scores, opt.scores_path);
  }

  cliniqa::RunManifest manifest;
  manifest.subcommand = "evaluate";
  manifest.add_input(opt.pred_path);
  manifest.add_input(opt.gold_path);
  manifest.add_output(opt.out_path);
  if (!opt.scores_path.empty()) manifest.add_output(opt.scores_path);
  cliniqa::write_manifest(manifest, cliniqa::manifest_path_for(opt.out_path));

  std::cerr << "evaluate: EM " << report.exact_match << ", F1 " << report.f1
            << " over " << report.n_evaluated << " questions -> " << opt.out_path
            << "\n";
}

// ---------------------------------------------------------------------------
// difficulty
// ---------------------------------------------------------------------------

struct DifficultyOpts {
  std::string scores_path;
  std::string gold_path;
  std::string out_path;
};

void run_difficulty(const DifficultyOpts& opt) {
  const auto scores = cliniqa::load_scores_csv(opt.scores_path);
  const cliniqa::Dataset dataset = cliniqa::load_dataset(opt.gold_path);
  std::map<std::string, std::string> template_of;
  for (const auto& qa : dataset.qa_pairs) {
    if (qa.template_id) template_of[qa.question_id] = *qa.template_id;
  }
  const auto labels = cliniqa::partition_difficulty(scores, template_of);
  cliniqa::save_difficulty(labels, opt.out_path);

  cliniqa::RunManifest manifest;
  manifest.subcommand = "difficulty";
  manifest.add_input(opt.scores_path);
  manifest.add_input(opt.gold_path);
  manifest.add_output(opt.out_path);
  cliniqa::write_manifest(manifest, cliniqa::manifest_path_for(opt.out_path));

  std::size_t easy = 0;
  for (const auto& [template_id, label] : labels) {
    if (label == cliniqa::Difficulty::kEasy) ++easy;
  }
  std::cerr << "difficulty: " << easy << " easy / " << labels.size() - easy
            << " hard templates -> " << opt.out_path << "\n";
}

// ---------------------------------------------------------------------------
// stats
// ---------------------------------------------------------------------------

struct StatsOpts {
  std::string in_path;
  std::string out_path;  // stdout when empty
};

void run_stats(const StatsOpts& opt) {
  const cliniqa::Dataset dataset = cliniqa::load_dataset(opt.in_path);
  const cliniqa::StatsReport stats = cliniqa::dataset_stats(dataset);
  nlohmann::ordered_json j;
  j["n_questions"] = stats.n_questions;
  j["n_contexts"] = stats.n_contexts;
  j["n_templates"] = stats.n_templates;
  j["avg_question_tokens"] = stats.avg_question_tokens;
  j["avg_answer_tokens"] = stats.avg_answer_tokens;
  j["avg_context_tokens"] = stats.avg_context_tokens;
  j["key_phrase_overlap_rate"] = stats.key_phrase_overlap_rate;

  if (opt.out_path.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  cliniqa::detail::write_file(opt.out_path, j.dump(2) + "\n");
  cliniqa::RunManifest manifest;
  manifest.subcommand = "stats";
  manifest.add_input(opt.in_path);
  manifest.add_output(opt.out_path);
  cliniqa::write_manifest(manifest, cliniqa::manifest_path_for(opt.out_path));
  std::cerr << "stats: " << stats.n_questions << " questions -> " << opt.out_path
            << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"clinical extractive-QA dataset toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cliniqa::kVersion));

  GenerateOpts gen;
  auto* generate = app.add_subcommand(
      "generate", "instantiate question templates over annotated notes");
  generate->add_option("--notes", gen.notes_path, "notes JSON ({\"notes\": [...]})")
      ->required();
  generate->add_option("--templates", gen.templates_path, "templates JSON")->required();
  generate->add_option("--annotations", gen.annotations_path, "annotations JSON")
      ->required();
  generate->add_option("--max-answer-tokens", gen.max_answer_tokens,
                       "drop answers longer than this many tokens");
  generate->add_option("--out", gen.out_path, "output dataset JSON")->required();
  generate->add_option("--seed", gen.seed, "run seed (recorded in the manifest)")
      ->required();
  generate->callback([&gen] { run_generate(gen); });

  SplitOpts split;
  auto* split_cmd =
      app.add_subcommand("split", "shuffle notes and split train/dev/test");
  split_cmd->add_option("--in", split.in_path, "input dataset JSON")->required();
  split_cmd->add_option("--ratios", split.ratios, "train,dev,test ratios");
  split_cmd->add_option("--out-dir", split.out_dir, "output directory")->required();
  split_cmd->add_option("--seed", split.seed, "shuffle seed")->required();
  split_cmd->callback([&split] { run_split(split); });

  SampleOpts sample;
  auto* sample_cmd =
      app.add_subcommand("sample", "subsample QA pairs per note at a fixed rate");
  sample_cmd->add_option("--in", sample.in_path, "input dataset JSON")->required();
  sample_cmd->add_option("--rate", sample.rate, "sampling rate in (0, 1]")->required();
  sample_cmd->add_option("--out", sample.out_path, "output dataset JSON")->required();
  sample_cmd->add_option("--seed", sample.seed, "sampling seed")->required();
  sample_cmd->callback([&sample] { run_sample(sample); });

  SegmentOpts segment;
  auto* segment_cmd =
      app.add_subcommand("segment", "detect section headers and segment notes");
  segment_cmd->add_option("--in", segment.in_path, "input dataset JSON")->required();
  segment_cmd->add_option("--lexicon", segment.lexicon_path,
                          "header lexicon (one lowercase phrase per line)");
  segment_cmd->add_option("--out", segment.out_path, "sections JSON")->required();
  segment_cmd->callback([&segment] { run_segment(segment); });

  AugmentOpts augment;
  auto* augment_cmd = app.add_subcommand(
      "augment", "replace question entities with knowledge-base synonyms");
  augment_cmd->add_option("--in", augment.in_path, "input dataset JSON")->required();
  augment_cmd->add_option("--entities", augment.entities_path, "KB entities JSON")
      ->required();
  augment_cmd->add_option("--triples", augment.triples_path, "KB triples TSV")
      ->required();
  augment_cmd->add_option("--lexicon", augment.lexicon_path,
                          "surface->entity lexicon TSV (default: from the KB)");
  augment_cmd->add_option("--out", augment.out_path, "output dataset JSON")->required();
  augment_cmd->add_option("--substitutions-out", augment.substitutions_path,
                          "substitution provenance JSON");
  augment_cmd->add_option("--seed", augment.seed, "synonym choice seed")->required();
  augment_cmd->callback([&augment] { run_augment(augment); });

  KgeTrainOpts kge;
  auto* kge_cmd = app.add_subcommand(
      "kge-train", "train translation embeddings on the knowledge base");
  kge_cmd->add_option("--triples", kge.triples_path, "KB triples TSV")->required();
  kge_cmd->add_option("--entities", kge.entities_path, "KB entities JSON")->required();
  kge_cmd->add_option("--dim", kge.config.dim, "embedding dimension");
  kge_cmd->add_option("--margin", kge.config.margin, "ranking margin");
  kge_cmd->add_option("--lr", kge.config.learning_rate, "SGD learning rate");
  kge_cmd->add_option("--epochs", kge.config.epochs, "training epochs");
  kge_cmd->add_option("--batch-size", kge.config.batch_size, "minibatch size");
  kge_cmd->add_option("--norm", kge.norm, "distance norm: L1 or L2");
  kge_cmd->add_option("--out-entities", kge.out_entities, "entity vectors TSV")
      ->required();
  kge_cmd->add_option("--out-relations", kge.out_relations, "relation vectors TSV")
      ->required();
  kge_cmd->add_option("--loss-out", kge.loss_path, "per-epoch loss CSV");
  kge_cmd->add_option("--init-entities", kge.init_entities_path,
                      "initial entity vectors TSV");
  kge_cmd->add_option("--init-relations", kge.init_relations_path,
                      "initial relation vectors TSV");
  kge_cmd->add_option("--seed", kge.config.seed, "training seed")->required();
  kge_cmd->callback([&kge] { run_kge_train(kge); });

  FuseOpts fuse;
  auto* fuse_cmd = app.add_subcommand(
      "fuse", "fuse word and entity vectors over plain-text passages");
  fuse_cmd->add_option("--in", fuse.in_path, "text file, one passage per line")
      ->required();
  fuse_cmd->add_option("--entity-embeddings", fuse.entity_embeddings_path,
                       "entity vectors TSV")
      ->required();
  fuse_cmd->add_option("--relation-embeddings", fuse.relation_embeddings_path,
                       "relation vectors TSV")
      ->required();
  fuse_cmd->add_option("--lexicon", fuse.lexicon_path, "surface->entity lexicon TSV")
      ->required();
  fuse_cmd->add_option("--params", fuse.params_path, "fusion parameters JSON")
      ->required();
  fuse_cmd->add_option("--word-vecs", fuse.word_vecs_path, "word vectors TSV");
  fuse_cmd->add_option("--word-dim", fuse.word_dim,
                       "random word vector dimension (with --seed)");
  fuse_cmd->add_option("--seed", fuse.seed, "word vector seed");
  fuse_cmd->add_option("--out", fuse.out_path, "fused vectors TSV")->required();
  fuse_cmd->callback([&fuse] { run_fuse(fuse); });

  ReadOpts read;
  auto* read_cmd =
      app.add_subcommand("read", "predict answer lines for every question");
  read_cmd->add_option("--in", read.in_path, "input dataset JSON")->required();
  read_cmd->add_option("--mode", read.mode, "lexical or lexical+knowledge");
  read_cmd->add_option("--lambda", read.lambda, "embedding term weight in [0, 1]");
  read_cmd->add_option("--entity-embeddings", read.entity_embeddings_path,
                       "entity vectors TSV");
  read_cmd->add_option("--relation-embeddings", read.relation_embeddings_path,
                       "relation vectors TSV");
  read_cmd->add_option("--lexicon", read.lexicon_path, "surface->entity lexicon TSV");
  read_cmd->add_option("--params", read.params_path, "fusion parameters JSON");
  read_cmd->add_option("--word-vecs", read.word_vecs_path, "word vectors TSV");
  read_cmd->add_option("--word-dim", read.word_dim,
                       "random word vector dimension (with --seed)");
  read_cmd->add_option("--seed", read.seed, "word vector seed");
  read_cmd->add_option("--out", read.out_path, "predictions JSON")->required();
  read_cmd->callback([&read] { run_read(read); });

  EvaluateOpts evaluate;
  auto* evaluate_cmd =
      app.add_subcommand("evaluate", "score predictions against gold answers");
  evaluate_cmd->add_option("--pred", evaluate.pred_path, "predictions JSON")
      ->required();
  evaluate_cmd->add_option("--gold", evaluate.gold_path, "gold dataset JSON")
      ->required();
  evaluate_cmd->add_option("--out", evaluate.out_path, "report JSON")->required();
  evaluate_cmd->add_option("--scores-out", evaluate.scores_path,
                           "per-question F1 CSV (question_id,score)");
  evaluate_cmd->callback([&evaluate] { run_evaluate(evaluate); });

  DifficultyOpts difficulty;
  auto* difficulty_cmd = app.add_subcommand(
      "difficulty", "label templates easy/hard from per-question scores");
  difficulty_cmd->add_option("--scores", difficulty.scores_path,
                             "per-question score CSV")
      ->required();
  difficulty_cmd->add_option("--gold", difficulty.gold_path, "gold dataset JSON")
      ->required();
  difficulty_cmd->add_option("--out", difficulty.out_path, "difficulty JSON")
      ->required();
  difficulty_cmd->callback([&difficulty] { run_difficulty(difficulty); });

  StatsOpts stats;
  auto* stats_cmd = app.add_subcommand("stats", "corpus statistics");
  stats_cmd->add_option("--in", stats.in_path, "input dataset JSON")->required();
  stats_cmd->add_option("--out", stats.out_path, "stats JSON (default: stdout)");
  stats_cmd->callback([&stats] { run_stats(stats); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);  // --help / --version
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const cliniqa::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
