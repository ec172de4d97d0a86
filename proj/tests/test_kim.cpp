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

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "cliniqa/error.hpp"
#include "cliniqa/kim.hpp"
#include "cliniqa/linking.hpp"
#include "cliniqa/rng.hpp"
#include "cliniqa/text.hpp"
#include "cliniqa/transe.hpp"
#include "test_util.hpp"

using namespace cliniqa;
using Catch::Approx;

using Vecs = std::vector<std::vector<double>>;

TEST_CASE("Matrix applies y += Mx with shape checks") {
  Matrix m = Matrix::zeros(2, 3);
  m.data = {1, 2, 3,
            4, 5, 6};
  std::vector<double> y = {10, 20};
  m.apply_add({1, 1, 1}, y);
  CHECK(y == std::vector<double>{16, 35});

  CHECK(Matrix::identity(3).at(1, 1) == 1.0);
  CHECK(Matrix::identity(3).at(1, 2) == 0.0);

  std::vector<double> wrong = {0.0};
  CHECK_THROWS_AS(m.apply_add({1, 1}, y), InvalidArgument);
  CHECK_THROWS_AS(m.apply_add({1, 1, 1}, wrong), InvalidArgument);
}

TEST_CASE("activation parsing and application") {
  CHECK(parse_activation("tanh") == Activation::kTanh);
  CHECK(parse_activation("identity") == Activation::kIdentity);
  CHECK(parse_activation("relu") == Activation::kRelu);
  CHECK_THROWS_AS(parse_activation("softplus"), InvalidArgument);
  CHECK(activation_name(Activation::kTanh) == std::string("tanh"));

  CHECK(apply_activation(Activation::kIdentity, -2.5) == -2.5);
  CHECK(apply_activation(Activation::kRelu, -2.5) == 0.0);
  CHECK(apply_activation(Activation::kRelu, 2.5) == 2.5);
  CHECK(apply_activation(Activation::kTanh, 1.0) == Approx(0.7615941559557649));
}

TEST_CASE("entity_passthrough returns entity vectors bit-exactly") {
  const KimParams params = KimParams::entity_passthrough(5, 3);
  Rng rng(31);
  Vecs words(4, std::vector<double>(5));
  Vecs ents(4, std::vector<double>(3));
  for (auto& v : words) {
    for (double& x : v) x = rng.uniform(-2.0, 2.0);
  }
  for (auto& v : ents) {
    for (double& x : v) x = rng.uniform(-2.0, 2.0);
  }
  const Vecs fused = kim_fuse(words, ents, params);
  CHECK(fused == ents);  // exact: W_c = 0, W_e = I, b = 0, identity activation
}

TEST_CASE("kim_fuse matches a hand-computed tanh example") {
  KimParams params;
  params.w_c = Matrix::identity(1);
  params.w_e = Matrix::identity(1);
  params.b = {0.5};
  params.activation = Activation::kTanh;

  const Vecs fused = kim_fuse({{0.25}}, {{0.25}}, params);
  REQUIRE(fused.size() == 1);
  REQUIRE(fused[0].size() == 1);
  // tanh(0.25 + 0.25 + 0.5) = tanh(1)
  CHECK_THAT(fused[0][0],
             Catch::Matchers::WithinAbs(0.7615941559557649, 1e-9));

  params.activation = Activation::kRelu;
  CHECK(kim_fuse({{-2.0}}, {{0.25}}, params)[0][0] == 0.0);  // relu clips
  params.activation = Activation::kIdentity;
  CHECK(kim_fuse({{-2.0}}, {{0.25}}, params)[0][0] == Approx(-1.25));
}

TEST_CASE("kim_fuse on a wider hand example") {
  // h = tanh(W_c w + W_e e + b) with independent accumulation.
  KimParams params;
  params.w_c = Matrix::zeros(2, 3);
  params.w_c.data = {0.1, 0.2, 0.3,
                     -0.1, 0.0, 0.4};
  params.w_e = Matrix::zeros(2, 2);
  params.w_e.data = {1.0, 0.0,
                     0.5, -0.5};
  params.b = {0.05, -0.05};

  const std::vector<double> w = {1.0, 2.0, -1.0};
  const std::vector<double> e = {0.3, 0.7};
  const Vecs fused = kim_fuse({w}, {e}, params);

  const double pre0 = 0.1 * 1.0 + 0.2 * 2.0 + 0.3 * -1.0 + 1.0 * 0.3 + 0.0 * 0.7 + 0.05;
  const double pre1 = -0.1 * 1.0 + 0.0 * 2.0 + 0.4 * -1.0 + 0.5 * 0.3 - 0.5 * 0.7 - 0.05;
  CHECK(fused[0][0] == Approx(std::tanh(pre0)).epsilon(1e-12));
  CHECK(fused[0][1] == Approx(std::tanh(pre1)).epsilon(1e-12));
}

TEST_CASE("kim_fuse validates shapes") {
  const KimParams params = KimParams::entity_passthrough(2, 2);
  const Vecs words = {{1.0, 2.0}};
  const Vecs ents = {{1.0, 2.0}};
  CHECK(kim_fuse({}, {}, params).empty());
  CHECK_THROWS_AS(kim_fuse(words, {}, params), InvalidArgument);          // length
  CHECK_THROWS_AS(kim_fuse({{1.0}}, ents, params), InvalidArgument);     // word dim
  CHECK_THROWS_AS(kim_fuse(words, {{1.0, 2.0, 3.0}}, params), InvalidArgument);

  KimParams broken = params;
  broken.b = {0.0};
  CHECK_THROWS_AS(kim_fuse(words, ents, broken), InvalidArgument);

  KimParams infinite = params;
  infinite.b = {0.0, std::numeric_limits<double>::infinity()};
  CHECK_THROWS_AS(kim_fuse(words, ents, infinite), InvalidArgument);
}

TEST_CASE("align_entities_to_tokens places vectors at mention heads") {
  EmbeddingTable table;
  table.dim = 2;
  table.entity_vecs["E3"] = {0.6, -0.6};

  const std::string text = "chronic ganglion cyst noted";
  const auto tokens = tokenize_with_offsets(text);
  REQUIRE(tokens.size() == 4);
  const std::vector<EntityMention> mentions = {{"ganglion cyst", "E3", 8, 21}};

  const Vecs aligned = align_entities_to_tokens(tokens, mentions, table);
  REQUIRE(aligned.size() == 4);
  CHECK(aligned[0] == std::vector<double>{0.0, 0.0});
  CHECK(aligned[1] == std::vector<double>{0.6, -0.6});  // mention head token
  CHECK(aligned[2] == std::vector<double>{0.0, 0.0});   // rest of the mention
  CHECK(aligned[3] == std::vector<double>{0.0, 0.0});

  SECTION("mention off a token start is rejected") {
    const std::vector<EntityMention> inside = {{"anglion", "E3", 9, 16}};
    CHECK_THROWS_AS(align_entities_to_tokens(tokens, inside, table), InvalidArgument);
  }
  SECTION("unknown entity id is rejected") {
    const std::vector<EntityMention> ghost = {{"ganglion cyst", "E9", 8, 21}};
    CHECK_THROWS_AS(align_entities_to_tokens(tokens, ghost, table), IntegrityError);
  }
  SECTION("stored vector with the wrong width is rejected") {
    table.entity_vecs["E3"] = {1.0, 2.0, 3.0};
    CHECK_THROWS_AS(align_entities_to_tokens(tokens, mentions, table), IntegrityError);
  }
}

TEST_CASE("random word vectors are seed-stable and order-independent") {
  const WordVecs a = random_word_vecs({"aspirin", "lasix"}, 8, 3);
  const WordVecs b = random_word_vecs({"lasix", "zeta", "aspirin"}, 8, 3);
  CHECK(a.vecs.at("aspirin") == b.vecs.at("aspirin"));
  CHECK(a.vecs.at("lasix") == b.vecs.at("lasix"));

  const WordVecs c = random_word_vecs({"aspirin"}, 8, 4);
  CHECK(a.vecs.at("aspirin") != c.vecs.at("aspirin"));  // seed matters

  // Case-folded lookup and bounded entries.
  REQUIRE(a.find("ASPIRIN") != nullptr);
  CHECK(*a.find("ASPIRIN") == a.vecs.at("aspirin"));
  CHECK(a.find("unknown") == nullptr);
  const double bound = 1.0 / std::sqrt(8.0);
  for (const double x : a.vecs.at("aspirin")) {
    CHECK(std::fabs(x) <= bound);
  }
  CHECK_THROWS_AS(random_word_vecs({"x"}, 0, 1), InvalidArgument);
}

TEST_CASE("word vectors round-trip through the TSV format") {
  testutil::TempDir tmp;
  const WordVecs words = random_word_vecs({"alpha", "beta"}, 5, 11);
  save_word_vecs(words, tmp.file("words.tsv"));
  CHECK(load_word_vecs(tmp.file("words.tsv")) == words);
}

TEST_CASE("fusion parameters round-trip through JSON") {
  testutil::TempDir tmp;
  KimParams params;
  params.w_c = Matrix::zeros(2, 3);
  params.w_c.data = {0.5, -1.25, 2.0, 0.0, 0.125, -0.75};
  params.w_e = Matrix::identity(2);
  params.b = {0.25, -0.5};
  params.activation = Activation::kTanh;

  save_kim_params(params, tmp.file("kim.json"));
  const KimParams loaded = load_kim_params(tmp.file("kim.json"));
  CHECK(loaded == params);

  testutil::write_file(tmp.file("bad.json"), R"({"activation": "tanh"})");
  CHECK_THROWS_AS(load_kim_params(tmp.file("bad.json")), FormatError);
}
