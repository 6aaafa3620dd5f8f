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

#include "tmembed/embedding.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

namespace tmembed {

namespace {

// Stream id for example generation, distinct from the machine's streams.
constexpr std::uint64_t kExampleStream = ~std::uint64_t{0} - 1;

// Floyd's algorithm: `count` distinct ranks from [0, n).
std::vector<std::size_t> sample_ranks(std::size_t n, std::size_t count, SplitMix64& rng) {
  std::vector<std::size_t> picked;
  picked.reserve(count);
  std::unordered_set<std::size_t> seen;
  for (std::size_t j = n - count; j < n; ++j) {
    const auto t = static_cast<std::size_t>(rng.below(j + 1));
    const std::size_t chosen = seen.contains(t) ? j : t;
    seen.insert(chosen);
    picked.push_back(chosen);
  }
  return picked;
}

}  // namespace

void EmbedConfig::validate() const {
  if (accumulation < 1) throw std::invalid_argument("accumulation u must be >= 1");
  if (rounds < 1) throw std::invalid_argument("rounds r must be >= 1");
  tm.validate();
}

std::optional<TrainingExample> generate_example(const DocumentSet& docs, WordId k, std::size_t accumulation,
                                                SplitMix64& rng) {
  const bool target = (rng() >> 63) != 0;
  const DocIdRange pool = docs.docs_with(k, target);
  if (pool.empty()) return std::nullopt;

  TrainingExample ex;
  ex.k = k;
  ex.target = target;
  ex.x = BitVector(docs.num_words());
  for (auto rank : sample_ranks(pool.size(), std::min(accumulation, pool.size()), rng)) {
    for (auto w : docs.doc(pool[rank])) ex.x.set(w);
  }
  return ex;
}

TrainResult train(const DocumentSet& docs, const Vocabulary& vocab, const EmbedConfig& config,
                  const TrainOptions& options) {
  config.validate();
  if (vocab.empty()) throw std::invalid_argument("cannot train on an empty vocabulary");
  if (docs.num_docs() == 0) throw std::invalid_argument("cannot train on an empty corpus");
  if (docs.num_words() != vocab.size())
    throw std::invalid_argument("document set and vocabulary disagree on vocabulary size");

  TrainResult result{TMAutoencoder(config.tm, vocab.size()), {}, 0};
  result.machine.set_threads(options.threads);
  result.mean_error.reserve(config.rounds);

  SplitMix64 rng(SplitMix64::key(config.tm.seed, kExampleStream, 0));
  for (std::size_t round = 0; round < config.rounds; ++round) {
    RoundStats stats;
    stats.round = round;
    double error_sum = 0.0;
    std::size_t applied = 0;
    for (std::size_t k = 0; k < vocab.size(); ++k) {
      auto ex = generate_example(docs, static_cast<WordId>(k), config.accumulation, rng);
      if (!ex) {
        ++stats.skipped;
        continue;
      }
      error_sum += result.machine.update(*ex).error;
      ++applied;
    }
    stats.mean_error = applied ? error_sum / static_cast<double>(applied) : 0.0;
    result.mean_error.push_back(stats.mean_error);
    result.skipped += stats.skipped;
    if (options.on_round) options.on_round(stats);
  }
  return result;
}

EmbeddingMatrices extract_embeddings(const TMAutoencoder& machine) {
  const auto& w = machine.weights();
  EmbeddingMatrices emb;
  emb.margin = machine.config().margin;
  emb.weighted = WeightMatrix(w.rows(), w.cols());
  emb.binary.assign(w.rows(), BitVector(w.cols()));
  for (std::size_t k = 0; k < w.rows(); ++k) {
    for (std::size_t j = 0; j < w.cols(); ++j) {
      const std::int32_t v = w.at(k, j);
      emb.weighted.at(k, j) = std::clamp(v, 0, emb.margin);
      if (v > 0) emb.binary[k].set(j);
    }
  }
  emb.clauses.reserve(machine.num_clauses());
  for (const auto& c : machine.clauses()) emb.clauses.push_back(c.memorized_vars());
  return emb;
}

void write_weighted_text(std::ostream& out, const EmbeddingMatrices& emb, const Vocabulary& vocab) {
  for (std::size_t k = 0; k < emb.num_words(); ++k) {
    out << vocab.word(k);
    for (auto v : emb.weighted.row(k)) out << ' ' << v;
    out << '\n';
  }
}

void write_weighted_binary(std::ostream& out, const EmbeddingMatrices& emb, const Vocabulary& vocab) {
  out << emb.num_words() << ' ' << emb.num_clauses() << '\n';
  for (std::size_t k = 0; k < emb.num_words(); ++k) {
    out << vocab.word(k) << ' ';
    for (auto v : emb.weighted.row(k)) {
      const auto f = static_cast<float>(v);
      out.write(reinterpret_cast<const char*>(&f), sizeof f);
    }
    out << '\n';
  }
}

void write_connections(std::ostream& out, const EmbeddingMatrices& emb, const Vocabulary& vocab) {
  for (std::size_t k = 0; k < emb.num_words(); ++k) {
    out << vocab.word(k);
    emb.binary[k].for_each_set([&](std::size_t j) { out << ' ' << j; });
    out << '\n';
  }
}

}  // namespace tmembed
