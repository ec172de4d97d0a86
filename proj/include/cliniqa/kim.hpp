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

// Knowledge fusion layer: token-wise h_i = σ(W_c·w_i + W_e·e_i + b), where
// w_i is a word vector and e_i the entity vector of a mention whose first
// token is i (zero elsewhere). A single affine layer plus activation,
// applied position by position.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cliniqa/dataset_io.hpp"
#include "cliniqa/error.hpp"
#include "cliniqa/linking.hpp"
#include "cliniqa/rng.hpp"
#include "cliniqa/text.hpp"
#include "cliniqa/transe.hpp"

namespace cliniqa {

/// Dense row-major matrix, just large enough for the fusion layer.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;  // rows * cols, row-major

  static Matrix zeros(std::size_t rows, std::size_t cols) {
    Matrix m;
    m.rows = rows;
    m.cols = cols;
    m.data.assign(rows * cols, 0.0);
    return m;
  }

  static Matrix identity(std::size_t n) {
    Matrix m = zeros(n, n);
    for (std::size_t i = 0; i < n; ++i) m.data[i * n + i] = 1.0;
    return m;
  }

  double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  /// y += M x
  void apply_add(const std::vector<double>& x, std::vector<double>& y) const {
    if (x.size() != cols || y.size() != rows) {
      throw InvalidArgument("matrix-vector dimension mismatch: " +
                            std::to_string(rows) + "x" + std::to_string(cols) +
                            " vs x[" + std::to_string(x.size()) + "], y[" +
                            std::to_string(y.size()) + "]");
    }
    for (std::size_t i = 0; i < rows; ++i) {
      double acc = 0.0;
      const double* row = data.data() + i * cols;
      for (std::size_t j = 0; j < cols; ++j) acc += row[j] * x[j];
      y[i] += acc;
    }
  }

  bool operator==(const Matrix&) const = default;
};

enum class Activation { kIdentity, kTanh, kRelu };

inline const char* activation_name(Activation a) {
  switch (a) {
    case Activation::kIdentity: return "identity";
    case Activation::kTanh: return "tanh";
    case Activation::kRelu: return "relu";
  }
  return "identity";
}

inline Activation parse_activation(std::string_view s) {
  if (s == "identity") return Activation::kIdentity;
  if (s == "tanh") return Activation::kTanh;
  if (s == "relu") return Activation::kRelu;
  throw InvalidArgument("activation must be identity, tanh, or relu; got '" +
                        std::string(s) + "'");
}

inline double apply_activation(Activation a, double x) {
  switch (a) {
    case Activation::kIdentity: return x;
    case Activation::kTanh: return std::tanh(x);
    case Activation::kRelu: return x > 0.0 ? x : 0.0;
  }
  return x;
}

/// Parameters of the fusion layer: output dim d, word-side W_c (d×d1),
/// entity-side W_e (d×d2), bias b (d), and the activation.
struct KimParams {
  Matrix w_c;
  Matrix w_e;
  std::vector<double> b;
  Activation activation = Activation::kTanh;

  std::size_t out_dim() const { return w_c.rows; }
  std::size_t word_dim() const { return w_c.cols; }
  std::size_t entity_dim() const { return w_e.cols; }

  void validate() const {
    if (w_c.rows == 0 || w_c.cols == 0 || w_e.cols == 0) {
      throw InvalidArgument("fusion parameter matrices must be non-empty");
    }
    if (w_e.rows != w_c.rows || b.size() != w_c.rows) {
      throw InvalidArgument("fusion parameter shapes disagree: W_c is " +
                            std::to_string(w_c.rows) + "x" + std::to_string(w_c.cols) +
                            ", W_e is " + std::to_string(w_e.rows) + "x" +
                            std::to_string(w_e.cols) + ", b has " +
                            std::to_string(b.size()));
    }
    if (w_c.data.size() != w_c.rows * w_c.cols || w_e.data.size() != w_e.rows * w_e.cols) {
      throw InvalidArgument("fusion parameter matrix storage size mismatch");
    }
    for (const auto* m : {&w_c, &w_e}) {
      for (const double x : m->data) {
        if (!std::isfinite(x)) throw InvalidArgument("non-finite fusion parameter");
      }
    }
    for (const double x : b) {
      if (!std::isfinite(x)) throw InvalidArgument("non-finite fusion bias");
    }
  }

  /// Pass-through parameters: word vectors are ignored (W_c = 0) and the
  /// entity vector is returned unchanged (W_e = I, b = 0, identity σ).
  static KimParams entity_passthrough(std::size_t word_dim, std::size_t entity_dim) {
    KimParams p;
    p.w_c = Matrix::zeros(entity_dim, word_dim);
    p.w_e = Matrix::identity(entity_dim);
    p.b.assign(entity_dim, 0.0);
    p.activation = Activation::kIdentity;
    return p;
  }

  bool operator==(const KimParams&) const = default;
};

/// Position-wise fusion of parallel word and entity vector sequences.
inline std::vector<std::vector<double>> kim_fuse(
    const std::vector<std::vector<double>>& word_vecs,
    const std::vector<std::vector<double>>& entity_vecs, const KimParams& params) {
  params.validate();
  if (word_vecs.size() != entity_vecs.size()) {
    throw InvalidArgument("word and entity sequences differ in length: " +
                          std::to_string(word_vecs.size()) + " vs " +
                          std::to_string(entity_vecs.size()));
  }
  std::vector<std::vector<double>> out;
  out.reserve(word_vecs.size());
  for (std::size_t i = 0; i < word_vecs.size(); ++i) {
    std::vector<double> h = params.b;
    params.w_c.apply_add(word_vecs[i], h);
    params.w_e.apply_add(entity_vecs[i], h);
    for (double& x : h) x = apply_activation(params.activation, x);
    out.push_back(std::move(h));
  }
  return out;
}

/// One entity vector per token: position i carries the mention's entity
/// vector iff token i is the first token of that mention, and the zero
/// vector otherwise (including later tokens of multi-word mentions).
/// Mentions must start exactly at a token start; missing table entries are
/// an error.
inline std::vector<std::vector<double>> align_entities_to_tokens(
    const std::vector<Token>& tokens, const std::vector<EntityMention>& mentions,
    const EmbeddingTable& emb) {
  std::vector<std::vector<double>> out(tokens.size(),
                                       std::vector<double>(emb.dim, 0.0));
  for (const auto& mention : mentions) {
    std::size_t pos = tokens.size();
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (tokens[i].start == mention.start) {
        pos = i;
        break;
      }
    }
    if (pos == tokens.size()) {
      throw InvalidArgument("mention '" + mention.surface + "' at offset " +
                            std::to_string(mention.start) +
                            " does not start on a token boundary");
    }
    const auto* v = emb.find_entity(mention.entity_id);
    if (v == nullptr) {
      throw IntegrityError("mention entity '" + mention.entity_id +
                           "' is missing from the embedding table");
    }
    if (v->size() != emb.dim) {
      throw IntegrityError("entity '" + mention.entity_id + "' has dim " +
                           std::to_string(v->size()) + ", table says " +
                           std::to_string(emb.dim));
    }
    out[pos] = *v;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Word vectors: externally supplied table or seeded random per-vocabulary.
// ---------------------------------------------------------------------------

struct WordVecs {
  std::size_t dim = 0;
  std::map<std::string, std::vector<double>> vecs;  // lowercased token -> vec

  /// Lookup by lowercased token; unknown tokens get no vector.
  const std::vector<double>* find(std::string_view token) const {
    const auto it = vecs.find(to_lower_ascii(token));
    return it == vecs.end() ? nullptr : &it->second;
  }

  bool operator==(const WordVecs&) const = default;
};

/// Deterministic random word vectors: each token's vector comes from a
/// stream derived from (seed, token), uniform in ±1/√dim, so the table does
/// not depend on vocabulary order.
inline WordVecs random_word_vecs(const std::vector<std::string>& vocab, std::size_t dim,
                                 std::uint64_t seed) {
  if (dim < 1) throw InvalidArgument("word vector dim must be >= 1");
  WordVecs out;
  out.dim = dim;
  const double bound = 1.0 / std::sqrt(static_cast<double>(dim));
  for (const auto& token : vocab) {
    const std::string key = to_lower_ascii(token);
    if (out.vecs.count(key)) continue;
    Rng rng(derive_seed(seed, "word:" + key));
    std::vector<double> v(dim);
    for (double& x : v) x = rng.uniform(-bound, bound);
    out.vecs.emplace(key, std::move(v));
  }
  return out;
}

/// Word vectors in the embedding TSV format (the norm field is ignored).
inline WordVecs load_word_vecs(const std::filesystem::path& path) {
  auto file = detail::load_embedding_file(path);
  WordVecs out;
  out.dim = file.dim;
  for (auto& [id, v] : file.vecs) {
    out.vecs.emplace(to_lower_ascii(id), std::move(v));
  }
  return out;
}

inline void save_word_vecs(const WordVecs& words, const std::filesystem::path& path) {
  detail::save_embedding_file(path, words.vecs, words.dim, Norm::kL2);
}

// ---------------------------------------------------------------------------
// Fusion parameter file: JSON with explicit shapes.
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json kim_params_to_json(const KimParams& params) {
  params.validate();
  const auto matrix_rows = [](const Matrix& m) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < m.rows; ++i) {
      nlohmann::ordered_json row = nlohmann::ordered_json::array();
      for (std::size_t j = 0; j < m.cols; ++j) row.push_back(m.at(i, j));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  nlohmann::ordered_json j;
  j["activation"] = activation_name(params.activation);
  j["w_c"] = matrix_rows(params.w_c);
  j["w_e"] = matrix_rows(params.w_e);
  j["b"] = params.b;
  return j;
}

inline KimParams kim_params_from_json(const nlohmann::json& j, const std::string& origin) {
  try {
    const auto read_matrix = [&](const nlohmann::json& rows) {
      Matrix m;
      m.rows = rows.size();
      for (const auto& row : rows) {
        if (m.cols == 0) m.cols = row.size();
        if (row.size() != m.cols || m.cols == 0) {
          throw FormatError(origin + ": matrix rows have inconsistent or zero length");
        }
        for (const auto& x : row) m.data.push_back(x.get<double>());
      }
      return m;
    };
    KimParams params;
    params.activation = parse_activation(j.at("activation").get<std::string>());
    params.w_c = read_matrix(j.at("w_c"));
    params.w_e = read_matrix(j.at("w_e"));
    params.b = j.at("b").get<std::vector<double>>();
    params.validate();
    return params;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(origin + ": " + e.what());
  }
}

inline KimParams load_kim_params(const std::filesystem::path& path) {
  return kim_params_from_json(detail::parse_json_file(path), path.string());
}

inline void save_kim_params(const KimParams& params, const std::filesystem::path& path) {
  detail::write_file(path, kim_params_to_json(params).dump(2) + "\n");
}

}  // namespace cliniqa
