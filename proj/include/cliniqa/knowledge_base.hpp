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

// A small medical knowledge base: entities with canonical names and alias
// lists, plus (head, relation, tail) triples. Stands in for a licensed
// terminology; loaded from a JSON entity file and a TSV triple file.

#pragma once

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cliniqa/dataset_io.hpp"
#include "cliniqa/error.hpp"
#include "cliniqa/text.hpp"

namespace cliniqa {

struct EntityRecord {
  std::string entity_id;
  std::string canonical;
  std::vector<std::string> aliases;

  bool operator==(const EntityRecord&) const = default;
};

struct Triple {
  std::string head;
  std::string relation;
  std::string tail;

  auto operator<=>(const Triple&) const = default;
};

struct KnowledgeBase {
  std::vector<EntityRecord> entities;  // file order preserved
  std::vector<Triple> triples;

  const EntityRecord* find_entity(std::string_view entity_id) const {
    for (const auto& e : entities) {
      if (e.entity_id == entity_id) return &e;
    }
    return nullptr;
  }

  /// Relation names in order of first appearance.
  std::vector<std::string> relations() const {
    std::vector<std::string> out;
    for (const auto& t : triples) {
      if (std::find(out.begin(), out.end(), t.relation) == out.end()) {
        out.push_back(t.relation);
      }
    }
    return out;
  }

  /// Checks referential integrity: unique entity ids, nonempty relation
  /// names, and triple endpoints that resolve to entities.
  void validate() const {
    std::map<std::string_view, bool> seen;
    for (const auto& e : entities) {
      if (e.entity_id.empty()) throw IntegrityError("entity with empty entity_id");
      if (seen[e.entity_id]) {
        throw IntegrityError("duplicate entity_id '" + e.entity_id + "'");
      }
      seen[e.entity_id] = true;
    }
    for (const auto& t : triples) {
      if (t.relation.empty()) {
        throw IntegrityError("triple (" + t.head + ", , " + t.tail +
                             ") has an empty relation");
      }
      for (const auto* end : {&t.head, &t.tail}) {
        if (!seen.count(*end)) {
          throw IntegrityError("triple endpoint '" + *end + "' is not a known entity");
        }
      }
    }
  }

  bool operator==(const KnowledgeBase&) const = default;
};

/// Alias list minus the canonical form (case-insensitive), deduplicated
/// case-insensitively with the first spelling kept, in alias-list order.
/// Unknown entity ids are an error.
inline std::vector<std::string> lookup_synonyms(const KnowledgeBase& kb,
                                                std::string_view entity_id) {
  const EntityRecord* entity = kb.find_entity(entity_id);
  if (entity == nullptr) {
    throw InvalidArgument("unknown entity_id '" + std::string(entity_id) + "'");
  }
  const std::string canonical_lower = to_lower_ascii(entity->canonical);
  std::vector<std::string> out;
  std::vector<std::string> seen_lower;
  for (const auto& alias : entity->aliases) {
    std::string lower = to_lower_ascii(alias);
    if (lower == canonical_lower) continue;
    if (std::find(seen_lower.begin(), seen_lower.end(), lower) != seen_lower.end()) {
      continue;
    }
    seen_lower.push_back(std::move(lower));
    out.push_back(alias);
  }
  return out;
}

/// Entity file: JSON array of {entity_id, canonical, aliases}.
inline std::vector<EntityRecord> load_entities(const std::filesystem::path& path) {
  const auto root = detail::parse_json_file(path);
  try {
    std::vector<EntityRecord> out;
    for (const auto& j : root) {
      EntityRecord e;
      e.entity_id = j.at("entity_id").get<std::string>();
      e.canonical = j.at("canonical").get<std::string>();
      if (j.contains("aliases")) {
        for (const auto& a : j.at("aliases")) e.aliases.push_back(a.get<std::string>());
      }
      out.push_back(std::move(e));
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

/// Triple file: TSV `head<TAB>relation<TAB>tail`, one per line; blank lines
/// and lines starting with '#' are skipped.
inline std::vector<Triple> load_triples(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open triple file: " + path.string());
  std::vector<Triple> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const std::size_t tab1 = line.find('\t');
    const std::size_t tab2 = (tab1 == std::string::npos) ? std::string::npos
                                                         : line.find('\t', tab1 + 1);
    if (tab1 == std::string::npos || tab2 == std::string::npos ||
        line.find('\t', tab2 + 1) != std::string::npos) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) +
                        ": expected head<TAB>relation<TAB>tail");
    }
    Triple triple;
    triple.head = std::string(trim(std::string_view(line).substr(0, tab1)));
    triple.relation =
        std::string(trim(std::string_view(line).substr(tab1 + 1, tab2 - tab1 - 1)));
    triple.tail = std::string(trim(std::string_view(line).substr(tab2 + 1)));
    out.push_back(std::move(triple));
  }
  return out;
}

/// Loads and validates entities + triples as one knowledge base.
inline KnowledgeBase load_kb(const std::filesystem::path& entities_path,
                             const std::filesystem::path& triples_path) {
  KnowledgeBase kb;
  kb.entities = load_entities(entities_path);
  kb.triples = load_triples(triples_path);
  kb.validate();
  return kb;
}

/// Surface-form dictionary mapping lowercased surfaces to entity ids.
using Lexicon = std::map<std::string, std::string>;

/// Lexicon file: TSV `surface<TAB>entity_id`. Surfaces are lowercased; a
/// surface mapped to two different entities is an error.
inline Lexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open lexicon file: " + path.string());
  Lexicon lexicon;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) +
                        ": expected surface<TAB>entity_id");
    }
    std::string surface =
        to_lower_ascii(std::string(trim(std::string_view(line).substr(0, tab))));
    std::string entity_id{trim(std::string_view(line).substr(tab + 1))};
    if (surface.empty() || entity_id.empty()) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) +
                        ": empty surface or entity_id");
    }
    const auto [it, inserted] = lexicon.emplace(std::move(surface), entity_id);
    if (!inserted && it->second != entity_id) {
      throw IntegrityError(path.string() + ":" + std::to_string(line_no) +
                           ": surface '" + it->first + "' maps to both '" + it->second +
                           "' and '" + entity_id + "'");
    }
  }
  return lexicon;
}

/// Builds a lexicon from every canonical name and alias in the KB. When two
/// entities share a surface, the entity listed first wins.
inline Lexicon lexicon_from_kb(const KnowledgeBase& kb) {
  Lexicon lexicon;
  for (const auto& entity : kb.entities) {
    lexicon.emplace(to_lower_ascii(entity.canonical), entity.entity_id);
    for (const auto& alias : entity.aliases) {
      lexicon.emplace(to_lower_ascii(alias), entity.entity_id);
    }
  }
  return lexicon;
}

}  // namespace cliniqa
