//  Copyright 2026 The tmembed Authors. All Rights Reserved.
//
//  Licensed under the Apache License, Version 2.0 (the "License");
//  you may not use this file except in compliance with the License.
//  You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
//  Unless required by applicable law or agreed to in writing, software
//  distributed under the License is distributed on an "AS IS" BASIS,
//  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//  See the License for the specific language governing permissions and
//  limitations under the License.

#include "doctest.h"
#include "support/machines.hpp"
#include "tmembed/interpret.hpp"

using namespace tmembed;
using tmembed::testing::memorize_only;

namespace {

using Strings = std::vector<std::string>;

// coffee/hot/tea/cup; clause 0 = hot & cup, clause 1 empty, clause 2 = tea.
TMAutoencoder drinks_machine() {
  TMConfig cfg;
  cfg.clauses = 3;
  cfg.margin = 20;
  TMAutoencoder tm(cfg, 4);
  memorize_only(tm.clause(0), {1, 3});
  memorize_only(tm.clause(1), {});
  memorize_only(tm.clause(2), {2});
  const int rows[4][3] = {{7, 2, 0}, {3, -1, 9}, {7, 0, 4}, {-2, -3, -4}};
  for (std::size_t k = 0; k < 4; ++k)
    for (std::size_t j = 0; j < 3; ++j) tm.weights().at(k, j) = rows[k][j];
  return tm;
}

const Vocabulary& drinks_vocab() {
  static const Vocabulary v({"coffee", "hot", "tea", "cup"});
  return v;
}

}  // namespace

TEST_CASE("decode_clause lists memorized literals and positively weighted words") {
  const auto tm = drinks_machine();
  const auto e = decode_clause(tm, 0, drinks_vocab());
  CHECK(e.clause_id == 0);
  CHECK(e.literals == Strings{"hot", "cup"});
  using WW = std::vector<std::pair<std::string, std::int32_t>>;
  CHECK(e.connected_words == WW{{"coffee", 7}, {"tea", 7}, {"hot", 3}});

  const auto empty = decode_clause(tm, 1, drinks_vocab());
  CHECK(empty.literals.empty());
  CHECK(empty.connected_words == WW{{"coffee", 2}});
  CHECK(render_conjunction(empty.literals) == "TRUE");

  CHECK_THROWS_AS(decode_clause(tm, 3, drinks_vocab()), std::out_of_range);
}

TEST_CASE("decoded literals equal the memorized set on random memories") {
  SplitMix64 rng(77);
  std::vector<std::string> words;
  for (int i = 0; i < 40; ++i) words.push_back("w" + std::to_string(i));
  const Vocabulary vocab(words);
  TMConfig cfg;
  cfg.clauses = 25;
  cfg.depth = 3;
  TMAutoencoder tm(cfg, 40);
  for (std::size_t j = 0; j < 25; ++j)
    for (std::size_t i = 0; i < 40; ++i) tm.clause(j).set_position(i, 1 + static_cast<int>(rng.below(6)));
  for (std::size_t j = 0; j < 25; ++j) {
    Strings expected;
    for (std::size_t i = 0; i < 40; ++i)
      if (tm.clause(j).position(i) > 3) expected.push_back(words[i]);
    CHECK(decode_clause(tm, j, vocab).literals == expected);
  }
}

TEST_CASE("explain_word") {
  const auto tm = drinks_machine();
  const auto ex = explain_word(tm, "hot", 11, drinks_vocab());
  REQUIRE(ex.size() == 2);
  CHECK(ex[0].clause_id == 2);  // weight 9 before weight 3
  CHECK(ex[1].clause_id == 0);

  CHECK(explain_word(tm, "hot", 1, drinks_vocab()).size() == 1);
  CHECK(explain_word(tm, "cup", 5, drinks_vocab()).empty());
  CHECK_THROWS_AS(explain_word(tm, "milk", 5, drinks_vocab()), std::out_of_range);

  // Returned ids are exactly the connected clauses from the binary embedding.
  const auto emb = extract_embeddings(tm);
  for (std::size_t k = 0; k < 4; ++k) {
    const auto all = explain_word(tm, drinks_vocab().word(k), 100, drinks_vocab());
    BitVector ids(3);
    for (const auto& e : all) ids.set(e.clause_id);
    CHECK(ids == emb.binary[k]);
  }
}

TEST_CASE("conjunction rendering round-trips") {
  for (const auto& lits : {Strings{}, Strings{"a"}, Strings{"hot", "cup", "brew"}}) {
    CHECK(parse_conjunction(render_conjunction(lits)) == lits);
  }
  CHECK(render_conjunction({"hot", "cup"}) == "hot & cup");
  CHECK(parse_conjunction("  x&y &z ") == Strings{"x", "y", "z"});
  CHECK_THROWS_AS(parse_conjunction("a & & b"), std::invalid_argument);
}

TEST_CASE("sparsity report") {
  EmbeddingMatrices emb;
  emb.weighted = WeightMatrix(3, 600);
  emb.binary.assign(3, BitVector(600));
  for (std::size_t j = 0; j < 60; ++j) emb.binary[0].set(j);
  for (std::size_t j = 0; j < 120; ++j) emb.binary[1].set(j);
  auto r = sparsity_report(emb);
  CHECK(r.fractions[0] == doctest::Approx(0.10));
  CHECK(r.fractions[2] == 0.0);
  CHECK(r.max == doctest::Approx(0.2));
  CHECK(r.median == doctest::Approx(0.1));
  CHECK(r.mean == doctest::Approx(0.1));

  emb.binary.assign(4, BitVector(600));
  emb.weighted = WeightMatrix(4, 600);
  r = sparsity_report(emb);
  CHECK(r.max == 0.0);
  CHECK(r.median == 0.0);
}

TEST_CASE("json explanation keeps key order") {
  const auto tm = drinks_machine();
  const auto j = to_json(decode_clause(tm, 0, drinks_vocab()));
  CHECK(j.dump() ==
        R"({"clause":0,"literals":["hot","cup"],"conjunction":"hot & cup","words":[["coffee",7],["tea",7],["hot",3]]})");
}
