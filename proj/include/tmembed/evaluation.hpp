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

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tmembed/corpus.hpp"
#include "tmembed/embedding.hpp"

namespace tmembed {

struct Similarity {
  double value = 0.0;
  bool zero_norm = false;  // value forced to 0 because a vector was all zeros
};

/// Throws std::invalid_argument on length mismatch.
Similarity cosine(std::span<const std::int32_t> a, std::span<const std::int32_t> b);
Similarity cosine(std::span<const double> a, std::span<const double> b);

/// Ranks starting at 1; tied values share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values);

struct RankCorrelation {
  double spearman = 0.0;
  double kendall = 0.0;  // tau-b
  bool defined = true;   // false when either list is constant; both values are NaN then
};

/// Spearman rho (Pearson over average ranks) and Kendall tau-b, the latter
/// in O(n log n) with Knight's merge-sort count. Lists must have equal
/// length >= 2.
RankCorrelation rank_correlations(std::span<const double> predicted, std::span<const double> human);

struct WordPair {
  std::string a;
  std::string b;
  double score = 0.0;
};

struct SimilarityDataset {
  std::vector<WordPair> pairs;
};

/// "word_a word_b score" rows separated by whitespace or tabs; blank lines
/// and lines starting with '#' are ignored; words are lowercased.
SimilarityDataset read_similarity_dataset(std::istream& in);
SimilarityDataset read_similarity_dataset_file(const std::string& path);

struct EvalReport {
  double spearman = 0.0;
  double kendall = 0.0;
  double cosine_agreement = 0.0;  // cosine between predicted and human score vectors
  bool correlations_defined = true;
  std::size_t covered_pairs = 0;
  std::size_t skipped_pairs = 0;

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, std::size_t covered, std::size_t skipped)
      : std::runtime_error(what), covered_(covered), skipped_(skipped) {}
  std::size_t covered_pairs() const { return covered_; }
  std::size_t skipped_pairs() const { return skipped_; }

 private:
  std::size_t covered_;
  std::size_t skipped_;
};

/// Scores every pair whose words are both in vocabulary with non-zero E
/// rows; the rest are counted as skipped. Throws EvaluationError when
/// fewer than two pairs remain.
EvalReport evaluate_similarity(const EmbeddingMatrices& emb, const Vocabulary& vocab, const SimilarityDataset& ds);

struct Neighbor {
  std::string word;
  double score = 0.0;
};

/// Top-t words by cosine over E rows, query excluded, ties by word index.
/// Throws std::out_of_range for unknown words.
std::vector<Neighbor> nearest_neighbors(const EmbeddingMatrices& emb, const Vocabulary& vocab, std::string_view word,
                                        std::size_t top_t);

}  // namespace tmembed
