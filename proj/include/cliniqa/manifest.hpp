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

// Run manifests: every CLI run that writes files also writes a manifest
// beside them recording the subcommand, tool version, seed, configuration,
// input content hashes, and output paths. Manifests contain no timestamps,
// so replayed runs are byte-identical.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cliniqa/dataset_io.hpp"
#include "cliniqa/text.hpp"
#include "cliniqa/version.hpp"

namespace cliniqa {

/// Content hash of a file's bytes, as 16 hex digits.
inline std::string fnv1a64_file(const std::filesystem::path& path) {
  return hex64(fnv1a64(detail::read_file(path)));
}

struct RunManifest {
  std::string subcommand;
  std::string tool_version = kVersion;
  std::optional<std::uint64_t> seed;
  std::vector<std::pair<std::string, std::string>> config;  // flag -> rendered value
  std::vector<std::pair<std::string, std::string>> inputs;  // path -> content hash
  std::vector<std::string> outputs;

  void add_config(std::string key, std::string value) {
    config.emplace_back(std::move(key), std::move(value));
  }

  void add_input(const std::filesystem::path& path) {
    inputs.emplace_back(path.string(), fnv1a64_file(path));
  }

  void add_output(const std::filesystem::path& path) {
    outputs.push_back(path.string());
  }
};

inline nlohmann::ordered_json manifest_to_json(const RunManifest& manifest) {
  nlohmann::ordered_json j;
  j["subcommand"] = manifest.subcommand;
  j["tool_version"] = manifest.tool_version;
  if (manifest.seed.has_value()) j["seed"] = *manifest.seed;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [key, value] : manifest.config) config[key] = value;
  j["config"] = std::move(config);
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
  for (const auto& [path, hash] : manifest.inputs) inputs[path] = hash;
  j["inputs"] = std::move(inputs);
  j["outputs"] = manifest.outputs;
  return j;
}

inline void write_manifest(const RunManifest& manifest,
                           const std::filesystem::path& path) {
  detail::write_file(path, manifest_to_json(manifest).dump(2) + "\n");
}

/// Default manifest location: beside the (first) output file.
inline std::filesystem::path manifest_path_for(const std::filesystem::path& output) {
  return std::filesystem::path(output.string() + ".manifest.json");
}

}  // namespace cliniqa
