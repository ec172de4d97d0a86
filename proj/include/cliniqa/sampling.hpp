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

// Per-document question subsampling for redundancy experiments: each note
// keeps round(rate * n) of its QA pairs, drawn without replacement from a
// random stream derived from (seed, note_id) so one note's sample never
// depends on another note's contents.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string_view>
#include <vector>

#include "cliniqa/dataset.hpp"
#include "cliniqa/error.hpp"
#include "cliniqa/rng.hpp"

namespace cliniqa {

namespace detail {

/// round(rate * n) with halves rounding up; a small slack absorbs binary
/// representation error in products like 0.15 * 10.
inline std::size_t sample_count(double rate, std::size_t n) {
  const auto k = static_cast<std::size_t>(
      std::floor(rate * static_cast<double>(n) + 0.5 + 1e-9));
  return std::min(k, n);
}

/// First k positions of a seeded Fisher-Yates pass over 0..n-1, sorted.
inline std::vector<std::size_t> draw_without_replacement(std::size_t n, std::size_t k,
                                                         Rng& rng) {
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace detail

/// Keeps round(rate * n_qa) QA pairs per note, selected uniformly without
/// replacement. Notes are always retained; surviving QA pairs keep their
/// original relative order, so rate 1.0 is the identity. Deterministic in
/// (dataset, rate, seed).
inline Dataset sample_questions(const Dataset& dataset, double rate, std::uint64_t seed) {
  if (!(rate > 0.0) || rate > 1.0) {
    throw InvalidArgument("sampling rate must lie in (0, 1], got " + std::to_string(rate));
  }

  std::map<std::string_view, std::vector<std::size_t>> qa_of_note;
  for (std::size_t i = 0; i < dataset.qa_pairs.size(); ++i) {
    const auto& qa = dataset.qa_pairs[i];
    if (dataset.find_note(qa.note_id) == nullptr) {
      throw IntegrityError("question '" + qa.question_id +
                           "' references unknown note_id '" + qa.note_id + "'");
    }
    qa_of_note[qa.note_id].push_back(i);
  }

  std::vector<bool> keep(dataset.qa_pairs.size(), false);
  for (const auto& [note_id, indices] : qa_of_note) {
    const std::size_t k = detail::sample_count(rate, indices.size());
    Rng rng(derive_seed(seed, note_id));
    for (const std::size_t pos : detail::draw_without_replacement(indices.size(), k, rng)) {
      keep[indices[pos]] = true;
    }
  }

  Dataset out;
  out.notes = dataset.notes;
  for (std::size_t i = 0; i < dataset.qa_pairs.size(); ++i) {
    if (keep[i]) out.qa_pairs.push_back(dataset.qa_pairs[i]);
  }
  return out;
}

}  // namespace cliniqa
