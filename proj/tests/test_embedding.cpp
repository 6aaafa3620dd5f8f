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

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>

#include "doctest.h"
#include "support/synthetic.hpp"
#include "tmembed/embedding.hpp"

using namespace tmembed;

namespace {

DocumentSet singleton_docs(std::size_t count) {
  // Doc d holds only word d, plus word `count` (the target) in even docs.
  std::vector<Document> docs(count);
  for (std::size_t d = 0; d < count; ++d) {
    docs[d].push_back(static_cast<WordId>(d));
    if (d % 2 == 0) docs[d].push_back(static_cast<WordId>(count));
  }
  return DocumentSet(std::move(docs), count + 1);
}

}  // namespace

TEST_CASE("generate_example with u = 1 yields one document's vector") {
  const auto docs = singleton_docs(10);
  SplitMix64 rng(1);
  for (int i = 0; i < 200; ++i) {
    auto ex = generate_example(docs, 10, 1, rng);
    REQUIRE(ex);
    CHECK(ex->k == 10);
    bool matches = false;
    for (const auto& d : docs.docs()) matches = matches || ex->x == vectorize(d, docs.num_words());
    CHECK(matches);
    // Target 1 examples always contain the word itself.
    if (ex->target) CHECK(ex->x.test(10));
    else CHECK_FALSE(ex->x.test(10));
  }
}

TEST_CASE("generate_example unions u distinct documents from the chosen pool") {
  const auto docs = singleton_docs(40);
  SplitMix64 rng(5);
  for (int i = 0; i < 300; ++i) {
    auto ex = generate_example(docs, 40, 7, rng);
    REQUIRE(ex);
    std::size_t picked = 0;
    for (std::size_t d = 0; d < 40; ++d) {
      if (!ex->x.test(d)) continue;
      ++picked;
      CHECK((d % 2 == 0) == ex->target);  // every contributing doc came from the pool
    }
    CHECK(picked == 7);
  }
}

TEST_CASE("two pooled documents are OR-ed together") {
  // word 0 = a, 1 = b, 2 = c, 3 = target in both docs.
  DocumentSet docs({{0, 1, 3}, {1, 2, 3}, {2}}, 4);
  SplitMix64 rng(3);
  int positives = 0;
  for (int i = 0; i < 100; ++i) {
    auto ex = generate_example(docs, 3, 2, rng);
    REQUIRE(ex);
    if (!ex->target) {
      CHECK(ex->x == vectorize(docs.doc(2), 4));  // small pool: all of it, once
      continue;
    }
    ++positives;
    CHECK(ex->x == vectorize(std::vector<WordId>{0, 1, 2, 3}, 4));
  }
  CHECK(positives > 0);
}

TEST_CASE("words in every document (or none) are skipped on the empty branch") {
  DocumentSet docs({{0, 1}, {0}}, 3);
  SplitMix64 rng(9);
  int skipped_everywhere = 0, skipped_nowhere = 0;
  for (int i = 0; i < 200; ++i) {
    auto everywhere = generate_example(docs, 0, 2, rng);
    if (!everywhere) ++skipped_everywhere;
    else CHECK(everywhere->target);
    auto nowhere = generate_example(docs, 2, 2, rng);
    if (!nowhere) ++skipped_nowhere;
    else CHECK_FALSE(nowhere->target);
  }
  CHECK(skipped_everywhere > 50);
  CHECK(skipped_nowhere > 50);
}

TEST_CASE("target draws are balanced") {
  const auto docs = singleton_docs(60);
  SplitMix64 rng(17);
  const int draws = 40000;
  int ones = 0;
  for (int i = 0; i < draws; ++i) ones += generate_example(docs, 60, 25, rng)->target;
  // sd of the fraction ~ 0.0025
  CHECK(std::abs(ones / double(draws) - 0.5) < 0.0125);
}

TEST_CASE("config invariants") {
  EmbedConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.rounds = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.rounds = 1;
  cfg.accumulation = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  // Large-corpus settings.
  EmbedConfig ref;
  ref.tm.clauses = 600;
  ref.tm.margin = 1200;
  ref.tm.specificity = 5.0;
  ref.accumulation = 25;
  ref.rounds = 2000;
  CHECK_NOTHROW(ref.validate());
}

TEST_CASE("extract_embeddings clips and thresholds") {
  TMConfig cfg;
  cfg.clauses = 3;
  cfg.margin = 1200;
  TMAutoencoder tm(cfg, 3);
  auto& w = tm.weights();
  const int rows[3][3] = {{4, -5, 0}, {-1, -2, -3}, {1200 + 7, 1200, 1}};
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t j = 0; j < 3; ++j) w.at(k, j) = rows[k][j];
  const auto emb = extract_embeddings(tm);
  auto row = [&](std::size_t k) { return std::vector<int>(emb.weighted.row(k).begin(), emb.weighted.row(k).end()); };
  CHECK(row(0) == std::vector<int>{4, 0, 0});
  CHECK(row(1) == std::vector<int>{0, 0, 0});
  CHECK(row(2) == std::vector<int>{1200, 1200, 1});
  CHECK(emb.binary[0].test(0));
  CHECK_FALSE(emb.binary[0].test(1));
  CHECK_FALSE(emb.binary[0].test(2));  // zero is not connected
  CHECK(emb.binary[1].count() == 0);
  CHECK(emb.binary[2].count() == 3);
  CHECK(emb.clauses.size() == 3);
}

TEST_CASE("extraction is exact on random weights") {
  SplitMix64 rng(123);
  for (int trial = 0; trial < 100; ++trial) {
    TMConfig cfg;
    cfg.clauses = 1 + rng.below(30);
    cfg.margin = 1 + static_cast<std::int32_t>(rng.below(50));
    const std::size_t m = 1 + rng.below(20);
    TMAutoencoder tm(cfg, m);
    for (auto& v : tm.weights().data()) v = static_cast<std::int32_t>(rng.below(201)) - 100;
    const auto emb = extract_embeddings(tm);
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t j = 0; j < cfg.clauses; ++j) {
        const auto v = tm.weights().at(k, j);
        REQUIRE(emb.weighted.at(k, j) == std::min(std::max(v, 0), cfg.margin));
        REQUIRE(emb.binary[k].test(j) == (v > 0));
        if (emb.binary[k].test(j)) REQUIRE(emb.weighted.at(k, j) >= 1);
      }
  }
}

TEST_CASE("training is seed-deterministic and reports per-round error") {
  const auto corpus = tmembed::testing::make_two_topic_corpus(3, 300);
  std::istringstream in(tmembed::testing::join_lines(corpus.lines));
  const auto tokens = read_raw_corpus(in);
  const auto vocab = build_vocab(tokens, {});
  const auto docs = index_documents(tokens, vocab);

  EmbedConfig cfg;
  cfg.accumulation = 3;
  cfg.rounds = 20;
  cfg.tm.clauses = 40;
  cfg.tm.margin = 30;
  cfg.tm.seed = 7;
  std::size_t callbacks = 0;
  TrainOptions opts;
  opts.on_round = [&](const RoundStats& s) {
    CHECK(s.round == callbacks);
    ++callbacks;
  };
  const auto a = train(docs, vocab, cfg, opts);
  const auto b = train(docs, vocab, cfg);
  CHECK(callbacks == 20);
  CHECK(a.mean_error.size() == 20);
  CHECK(a.machine == b.machine);
  CHECK(a.mean_error == b.mean_error);
  for (double e : a.mean_error) CHECK((e >= 0 && e <= 2.0 * cfg.tm.margin));

  const auto ea = extract_embeddings(a.machine), eb = extract_embeddings(b.machine);
  CHECK(ea.weighted == eb.weighted);
  CHECK(ea.binary == eb.binary);

  cfg.tm.seed = 8;
  CHECK_FALSE(train(docs, vocab, cfg).machine == a.machine);

  TrainOptions threaded;
  threaded.threads = 4;
  cfg.tm.seed = 7;
  CHECK(train(docs, vocab, cfg, threaded).machine == a.machine);

  CHECK_THROWS_AS(train(DocumentSet({}, vocab.size()), vocab, cfg), std::invalid_argument);
}

TEST_CASE("export formats") {
  TMConfig cfg;
  cfg.clauses = 3;
  cfg.margin = 5;
  TMAutoencoder tm(cfg, 2);
  const int rows[2][3] = {{4, -5, 9}, {0, 1, 2}};
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t j = 0; j < 3; ++j) tm.weights().at(k, j) = rows[k][j];
  const Vocabulary vocab({"coffee", "hot"});
  const auto emb = extract_embeddings(tm);

  std::ostringstream text;
  write_weighted_text(text, emb, vocab);
  CHECK(text.str() == "coffee 4 0 5\nhot 0 1 2\n");

  std::ostringstream conn;
  write_connections(conn, emb, vocab);
  CHECK(conn.str() == "coffee 0 2\nhot 1 2\n");

  std::ostringstream bin;
  write_weighted_binary(bin, emb, vocab);
  const std::string s = bin.str();
  CHECK(s.rfind("2 3\ncoffee ", 0) == 0);
  float first = 0;
  std::memcpy(&first, s.data() + std::string("2 3\ncoffee ").size(), sizeof first);
  CHECK(first == 4.0f);
  CHECK(s.size() == std::string("2 3\n").size() + 2 * (3 * sizeof(float) + 2) + 6 + 3);
}
