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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "tmembed/corpus.hpp"
#include "tmembed/embedding.hpp"
#include "tmembed/tsetlin.hpp"

namespace tmembed {

struct ClauseExplanation {
  std::size_t clause_id = 0;
  std::vector<std::string> literals;  // Memorized words, vocabulary order
  std::vector<std::pair<std::string, std::int32_t>> connected_words;  // weight > 0, descending

  friend bool operator==(const ClauseExplanation&, const ClauseExplanation&) = default;
};

/// Throws std::out_of_range when j >= n.
ClauseExplanation decode_clause(const TMAutoencoder& machine, std::size_t j, const Vocabulary& vocab);

/// Clauses with positive weight for `word`, strongest first (ties by
/// clause index), at most top_t of them.
std::vector<ClauseExplanation> explain_word(const TMAutoencoder& machine, std::string_view word, std::size_t top_t,
                                            const Vocabulary& vocab);

/// "went & hospital"; the empty conjunction renders as "TRUE".
std::string render_conjunction(const std::vector<std::string>& literals);
/// Inverse of render_conjunction (literal order is preserved).
std::vector<std::string> parse_conjunction(std::string_view text);

struct SparsityReport {
  std::vector<double> fractions;  // per word: share of clauses with B = 1
  double max = 0.0;
  double median = 0.0;
  double mean = 0.0;
};

SparsityReport sparsity_report(const EmbeddingMatrices& emb);

/// {"clause", "literals", "conjunction", "words": [[word, weight], ...]} in that key order.
nlohmann::ordered_json to_json(const ClauseExplanation& e);

}  // namespace tmembed
