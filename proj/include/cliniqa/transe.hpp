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

// Knowledge-graph embeddings: a relation is modeled as a vector translation
// h + r ≈ t and trained with a margin ranking loss against uniformly
// corrupted negatives (corrupt head or tail with probability 1/2, resampling
// when the corruption is itself a true triple). Entity vectors are
// renormalized to unit L2 at the start of every epoch and after training.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cliniqa/error.hpp"
#include "cliniqa/knowledge_base.hpp"
#include "cliniqa/rng.hpp"
#include "cliniqa/text.hpp"

namespace cliniqa {

enum class Norm { kL1, kL2 };

inline const char* norm_name(Norm norm) { return norm == Norm::kL1 ? "L1" : "L2"; }

inline Norm parse_norm(std::string_view s) {
  if (s == "L1" || s == "l1") return Norm::kL1;
  if (s == "L2" || s == "l2") return Norm::kL2;
  throw InvalidArgument("norm must be L1 or L2, got '" + std::string(s) + "'");
}

struct TransEConfig {
  std::size_t dim = 100;
  double margin = 1.0;
  double learning_rate = 0.01;
  std::size_t epochs = 200;
  std::size_t batch_size = 1;
  Norm norm = Norm::kL2;
  std::uint64_t seed = 0;

  void validate() const {
    if (dim < 1) throw InvalidArgument("embedding dim must be >= 1");
    if (!(margin > 0.0)) throw InvalidArgument("margin must be > 0");
    if (!(learning_rate > 0.0)) throw InvalidArgument("learning rate must be > 0");
    if (batch_size < 1) throw InvalidArgument("batch size must be >= 1");
  }
};

struct EmbeddingTable {
  std::size_t dim = 0;
  Norm norm = Norm::kL2;
  std::map<std::string, std::vector<double>> entity_vecs;
  std::map<std::string, std::vector<double>> relation_vecs;

  const std::vector<double>* find_entity(std::string_view id) const {
    const auto it = entity_vecs.find(std::string(id));
    return it == entity_vecs.end() ? nullptr : &it->second;
  }
  const std::vector<double>* find_relation(std::string_view id) const {
    const auto it = relation_vecs.find(std::string(id));
    return it == relation_vecs.end() ? nullptr : &it->second;
  }

  bool operator==(const EmbeddingTable&) const = default;
};

namespace detail {

inline double vec_norm(const std::vector<double>& u, Norm norm) {
  double acc = 0.0;
  if (norm == Norm::kL1) {
    for (const double x : u) acc += std::fabs(x);
    return acc;
  }
  for (const double x : u) acc += x * x;
  return std::sqrt(acc);
}

/// Gradient of ‖u‖ with respect to u: sign(u) for L1 (0 at kinks),
/// u / ‖u‖ for L2 (0 at the origin).
inline std::vector<double> vec_norm_grad(const std::vector<double>& u, Norm norm) {
  std::vector<double> g(u.size(), 0.0);
  if (norm == Norm::kL1) {
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (u[i] > 0.0) g[i] = 1.0;
      else if (u[i] < 0.0) g[i] = -1.0;
    }
    return g;
  }
  const double n = vec_norm(u, Norm::kL2);
  if (n > 0.0) {
    for (std::size_t i = 0; i < u.size(); ++i) g[i] = u[i] / n;
  }
  return g;
}

inline std::vector<double> translation_residual(const std::vector<double>& h,
                                                const std::vector<double>& r,
                                                const std::vector<double>& t) {
  std::vector<double> u(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) u[i] = h[i] + r[i] - t[i];
  return u;
}

/// Loss and analytic gradients of one hinge term
/// max(0, margin + ‖h+r−t‖ − ‖hn+r−tn‖) with respect to the five vectors.
/// Gradients are all-zero when the hinge is inactive.
struct PairGrad {
  double loss = 0.0;
  std::vector<double> d_h, d_r, d_t, d_hn, d_tn;
};

inline PairGrad hinge_pair(const std::vector<double>& h, const std::vector<double>& r,
                           const std::vector<double>& t, const std::vector<double>& hn,
                           const std::vector<double>& tn, double margin, Norm norm) {
  const std::size_t dim = h.size();
  if (r.size() != dim || t.size() != dim || hn.size() != dim || tn.size() != dim) {
    throw InvalidArgument("embedding dimension mismatch in ranking pair");
  }
  PairGrad out;
  out.d_h.assign(dim, 0.0);
  out.d_r.assign(dim, 0.0);
  out.d_t.assign(dim, 0.0);
  out.d_hn.assign(dim, 0.0);
  out.d_tn.assign(dim, 0.0);

  const std::vector<double> u_pos = translation_residual(h, r, t);
  const std::vector<double> u_neg = translation_residual(hn, r, tn);
  const double raw = margin + vec_norm(u_pos, norm) - vec_norm(u_neg, norm);
  if (raw <= 0.0) return out;

  out.loss = raw;
  const std::vector<double> g_pos = vec_norm_grad(u_pos, norm);
  const std::vector<double> g_neg = vec_norm_grad(u_neg, norm);
  for (std::size_t i = 0; i < dim; ++i) {
    out.d_h[i] = g_pos[i];
    out.d_r[i] = g_pos[i] - g_neg[i];
    out.d_t[i] = -g_pos[i];
    out.d_hn[i] = -g_neg[i];
    out.d_tn[i] = g_neg[i];
  }
  return out;
}

inline void renormalize_l2(std::vector<double>& v) {
  const double n = vec_norm(v, Norm::kL2);
  if (n > 0.0) {
    for (double& x : v) x /= n;
  }
}

}  // namespace detail

/// Plausibility score ‖v_h + v_r − v_t‖ under the chosen norm; lower is
/// more plausible. Unknown ids are an error.
inline double transe_score(const EmbeddingTable& emb, const Triple& triple, Norm norm) {
  const auto* h = emb.find_entity(triple.head);
  const auto* r = emb.find_relation(triple.relation);
  const auto* t = emb.find_entity(triple.tail);
  if (h == nullptr || r == nullptr || t == nullptr) {
    throw InvalidArgument("triple (" + triple.head + ", " + triple.relation + ", " +
                          triple.tail + ") has an id missing from the embedding table");
  }
  return detail::vec_norm(detail::translation_residual(*h, *r, *t), norm);
}

inline double transe_score(const EmbeddingTable& emb, const Triple& triple) {
  return transe_score(emb, triple, emb.norm);
}

struct TrainResult {
  EmbeddingTable table;
  std::vector<double> epoch_losses;  // mean hinge loss per triple, per epoch
};

/// Trains embeddings by SGD on the margin ranking loss. Deterministic in
/// (triples, entity_ids, config): initialization draws entity vectors in
/// `entity_ids` order and relation vectors in first-appearance order, both
/// uniform in ±6/√dim (relations normalized once at init); an explicit
/// `init` table replaces the random draw. Batches accumulate gradients at
/// batch-start values and apply them together; batch_size 1 is plain SGD.
inline TrainResult train_transe(const std::vector<Triple>& triples,
                                const std::vector<std::string>& entity_ids,
                                const TransEConfig& config,
                                const EmbeddingTable* init = nullptr) {
  config.validate();
  if (triples.empty()) throw InvalidArgument("cannot train on an empty triple set");
  if (entity_ids.empty()) throw InvalidArgument("entity list is empty");

  std::map<std::string_view, std::size_t> entity_idx;
  for (std::size_t i = 0; i < entity_ids.size(); ++i) {
    if (!entity_idx.emplace(entity_ids[i], i).second) {
      throw IntegrityError("duplicate entity id '" + entity_ids[i] + "'");
    }
  }
  std::vector<std::string> relation_ids;
  std::map<std::string_view, std::size_t> relation_idx;
  for (const auto& t : triples) {
    if (relation_idx.emplace(t.relation, relation_ids.size()).second) {
      relation_ids.push_back(t.relation);
    }
  }

  struct IdxTriple {
    std::size_t h, r, t;
  };
  std::vector<IdxTriple> idx_triples;
  std::set<std::array<std::size_t, 3>> true_set;
  for (const auto& t : triples) {
    const auto hi = entity_idx.find(t.head);
    const auto ti = entity_idx.find(t.tail);
    if (hi == entity_idx.end() || ti == entity_idx.end()) {
      throw IntegrityError("triple endpoint '" +
                           (hi == entity_idx.end() ? t.head : t.tail) +
                           "' is not in the entity list");
    }
    const std::size_t r = relation_idx.at(t.relation);
    idx_triples.push_back(IdxTriple{hi->second, r, ti->second});
    true_set.insert({hi->second, r, ti->second});
  }

  const std::size_t n_entities = entity_ids.size();
  const std::size_t dim = config.dim;
  Rng rng(config.seed);

  std::vector<std::vector<double>> ent(n_entities);
  std::vector<std::vector<double>> rel(relation_ids.size());
  if (init != nullptr) {
    if (init->dim != dim) {
      throw IntegrityError("init table dim " + std::to_string(init->dim) +
                           " does not match config dim " + std::to_string(dim));
    }
    for (std::size_t i = 0; i < n_entities; ++i) {
      const auto* v = init->find_entity(entity_ids[i]);
      if (v == nullptr) {
        throw IntegrityError("init table is missing entity '" + entity_ids[i] + "'");
      }
      ent[i] = *v;
    }
    for (std::size_t i = 0; i < relation_ids.size(); ++i) {
      const auto* v = init->find_relation(relation_ids[i]);
      if (v == nullptr) {
        throw IntegrityError("init table is missing relation '" + relation_ids[i] + "'");
      }
      rel[i] = *v;
    }
  } else {
    const double bound = 6.0 / std::sqrt(static_cast<double>(dim));
    for (auto& v : ent) {
      v.resize(dim);
      for (double& x : v) x = rng.uniform(-bound, bound);
    }
    for (auto& v : rel) {
      v.resize(dim);
      for (double& x : v) x = rng.uniform(-bound, bound);
      detail::renormalize_l2(v);
    }
  }

  TrainResult result;
  std::vector<std::size_t> order(idx_triples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    for (auto& v : ent) detail::renormalize_l2(v);
    rng.shuffle(order);

    double total = 0.0;
    for (std::size_t begin = 0; begin < order.size(); begin += config.batch_size) {
      const std::size_t end = std::min(begin + config.batch_size, order.size());
      // (is_relation, index) -> accumulated gradient for this batch
      std::map<std::pair<bool, std::size_t>, std::vector<double>> grads;
      const auto accumulate = [&](bool is_rel, std::size_t idx,
                                  const std::vector<double>& g) {
        auto& slot = grads[{is_rel, idx}];
        if (slot.empty()) slot.assign(dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i) slot[i] += g[i];
      };

      for (std::size_t k = begin; k < end; ++k) {
        const IdxTriple pos = idx_triples[order[k]];
        const bool corrupt_head = rng.below(2) == 0;
        std::size_t hn = pos.h;
        std::size_t tn = pos.t;
        std::size_t attempts = 0;
        do {
          if (++attempts > 1000 * n_entities) {
            throw IntegrityError("cannot find a corrupting entity; the graph is "
                                 "too dense for negative sampling");
          }
          const auto cand = static_cast<std::size_t>(rng.below(n_entities));
          if (corrupt_head) hn = cand;
          else tn = cand;
        } while (true_set.count({hn, pos.r, tn}) > 0);

        const detail::PairGrad pg = detail::hinge_pair(
            ent[pos.h], rel[pos.r], ent[pos.t], ent[hn], ent[tn], config.margin,
            config.norm);
        total += pg.loss;
        if (pg.loss > 0.0) {
          accumulate(false, pos.h, pg.d_h);
          accumulate(true, pos.r, pg.d_r);
          accumulate(false, pos.t, pg.d_t);
          accumulate(false, hn, pg.d_hn);
          accumulate(false, tn, pg.d_tn);
        }
      }

      for (const auto& [key, g] : grads) {
        auto& v = key.first ? rel[key.second] : ent[key.second];
        for (std::size_t i = 0; i < dim; ++i) v[i] -= config.learning_rate * g[i];
      }
    }

    const double epoch_loss = total / static_cast<double>(idx_triples.size());
    if (!std::isfinite(epoch_loss)) {
      throw IntegrityError("non-finite loss at epoch " + std::to_string(epoch) +
                           "; lower the learning rate or margin");
    }
    result.epoch_losses.push_back(epoch_loss);
  }
  for (auto& v : ent) detail::renormalize_l2(v);

  result.table.dim = dim;
  result.table.norm = config.norm;
  for (std::size_t i = 0; i < n_entities; ++i) {
    result.table.entity_vecs.emplace(entity_ids[i], std::move(ent[i]));
  }
  for (std::size_t i = 0; i < relation_ids.size(); ++i) {
    result.table.relation_vecs.emplace(relation_ids[i], std::move(rel[i]));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Embedding-table and loss-trace files.
// ---------------------------------------------------------------------------

namespace detail {

struct EmbeddingFile {
  std::size_t dim = 0;
  Norm norm = Norm::kL2;
  std::map<std::string, std::vector<double>> vecs;
};

/// One vector table as TSV: a `# dim=<d> norm=<L1|L2>` header line, then
/// `id<TAB>v1<TAB>...<TAB>vd` rows in sorted id order.
inline void save_embedding_file(const std::filesystem::path& path,
                                const std::map<std::string, std::vector<double>>& vecs,
                                std::size_t dim, Norm norm) {
  std::string out = "# dim=" + std::to_string(dim) + " norm=" + norm_name(norm) + "\n";
  for (const auto& [id, v] : vecs) {
    if (v.size() != dim) {
      throw IntegrityError("vector for '" + id + "' has dim " +
                           std::to_string(v.size()) + ", expected " +
                           std::to_string(dim));
    }
    out += id;
    for (const double x : v) {
      out += '\t';
      out += fmt_double(x);
    }
    out += '\n';
  }
  write_file(path, out);
}

inline EmbeddingFile load_embedding_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open embedding file: " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.empty() || line[0] != '#') {
    throw FormatError(path.string() + ": missing '# dim=... norm=...' header");
  }
  EmbeddingFile file;
  bool have_dim = false;
  for (const auto token : split_tokens(std::string_view(line).substr(1))) {
    if (token.rfind("dim=", 0) == 0) {
      file.dim = static_cast<std::size_t>(std::strtoull(token.data() + 4, nullptr, 10));
      have_dim = true;
    } else if (token.rfind("norm=", 0) == 0) {
      file.norm = parse_norm(token.substr(5));
    }
  }
  if (!have_dim || file.dim == 0) {
    throw FormatError(path.string() + ": header does not declare a positive dim");
  }

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == '\t') {
        cells.push_back(std::string_view(line).substr(start, i - start));
        start = i + 1;
      }
    }
    if (cells.size() != file.dim + 1 || cells[0].empty()) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) +
                        ": expected id and " + std::to_string(file.dim) + " values");
    }
    std::vector<double> v(file.dim);
    for (std::size_t i = 0; i < file.dim; ++i) {
      const std::string cell(cells[i + 1]);
      char* end = nullptr;
      v[i] = std::strtod(cell.c_str(), &end);
      if (end != cell.c_str() + cell.size() || !std::isfinite(v[i])) {
        throw FormatError(path.string() + ":" + std::to_string(line_no) +
                          ": bad numeric value '" + cell + "'");
      }
    }
    if (!file.vecs.emplace(std::string(cells[0]), std::move(v)).second) {
      throw IntegrityError(path.string() + ":" + std::to_string(line_no) +
                           ": duplicate id '" + std::string(cells[0]) + "'");
    }
  }
  return file;
}

}  // namespace detail

inline void save_embedding_table(const EmbeddingTable& table,
                                 const std::filesystem::path& entities_path,
                                 const std::filesystem::path& relations_path) {
  detail::save_embedding_file(entities_path, table.entity_vecs, table.dim, table.norm);
  detail::save_embedding_file(relations_path, table.relation_vecs, table.dim, table.norm);
}

inline EmbeddingTable load_embedding_table(const std::filesystem::path& entities_path,
                                           const std::filesystem::path& relations_path) {
  auto entities = detail::load_embedding_file(entities_path);
  auto relations = detail::load_embedding_file(relations_path);
  if (entities.dim != relations.dim || entities.norm != relations.norm) {
    throw IntegrityError("entity and relation files disagree on dim or norm");
  }
  EmbeddingTable table;
  table.dim = entities.dim;
  table.norm = entities.norm;
  table.entity_vecs = std::move(entities.vecs);
  table.relation_vecs = std::move(relations.vecs);
  return table;
}

/// Loss trace as CSV with an `epoch,loss` header.
inline void save_loss_trace(const std::filesystem::path& path,
                            const std::vector<double>& losses) {
  std::string out = "epoch,loss\n";
  for (std::size_t i = 0; i < losses.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += fmt_double(losses[i]);
    out += '\n';
  }
  detail::write_file(path, out);
}

}  // namespace cliniqa
