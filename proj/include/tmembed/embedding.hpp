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

// Self-supervised training of the autoencoder on a document corpus and
// extraction of the word embeddings from its weights.
//
// Each round visits every vocabulary word k once, in index order. A fair
// coin picks the target q; u documents are drawn without replacement from
// those that contain k (q = 1) or lack it (q = 0), their word sets are
// OR-ed into one input vector and the machine is updated on (k, x, q).

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tmembed/corpus.hpp"
#include "tmembed/random.hpp"
#include "tmembed/tsetlin.hpp"

namespace tmembed {

struct EmbedConfig {
  std::size_t accumulation = 25;
  std::size_t rounds = 2000;
  TMConfig tm;

  void validate() const;
};

/// Draws one example for word k, or nullopt when the chosen pool is empty
/// (word present in every document, or in none).
std::optional<TrainingExample> generate_example(const DocumentSet& docs, WordId k, std::size_t accumulation,
                                                SplitMix64& rng);

struct RoundStats {
  std::size_t round = 0;
  double mean_error = 0.0;  // mean margin error over the round's applied examples
  std::size_t skipped = 0;
};

struct TrainOptions {
  unsigned threads = 1;
  std::function<void(const RoundStats&)> on_round;
};

struct TrainResult {
  TMAutoencoder machine;
  std::vector<double> mean_error;  // one entry per round
  std::size_t skipped = 0;
};

TrainResult train(const DocumentSet& docs, const Vocabulary& vocab, const EmbedConfig& config,
                  const TrainOptions& options = {});

/// E = clip(W, 0, T) and B = (W > 0), plus each clause's Memorized set.
struct EmbeddingMatrices {
  std::int32_t margin = 0;
  WeightMatrix weighted;                           // E, m x n
  std::vector<BitVector> binary;                   // B, one row per word
  std::vector<std::vector<std::size_t>> clauses;   // literal word ids per clause

  std::size_t num_words() const { return weighted.rows(); }
  std::size_t num_clauses() const { return weighted.cols(); }
};

EmbeddingMatrices extract_embeddings(const TMAutoencoder& machine);

/// "word v_1 ... v_n" per line, no header.
void write_weighted_text(std::ostream& out, const EmbeddingMatrices& emb, const Vocabulary& vocab);
/// word2vec binary layout: "m n\n" then per word "word " + n float32 + "\n".
void write_weighted_binary(std::ostream& out, const EmbeddingMatrices& emb, const Vocabulary& vocab);
/// "word j_1 j_2 ..." listing the clauses with B = 1.
void write_connections(std::ostream& out, const EmbeddingMatrices& emb, const Vocabulary& vocab);

}  // namespace tmembed
