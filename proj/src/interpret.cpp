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

#include "tmembed/interpret.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace tmembed {

namespace {

constexpr std::string_view kEmptyConjunction = "TRUE";
constexpr std::string_view kAnd = " & ";

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

ClauseExplanation decode_clause(const TMAutoencoder& machine, std::size_t j, const Vocabulary& vocab) {
  if (j >= machine.num_clauses()) throw std::out_of_range("clause index out of range");
  ClauseExplanation e;
  e.clause_id = j;
  for (auto i : machine.clause(j).memorized_vars()) e.literals.push_back(vocab.word(i));

  const auto& w = machine.weights();
  std::vector<std::size_t> words;
  for (std::size_t k = 0; k < w.rows(); ++k)
    if (w.at(k, j) > 0) words.push_back(k);
  std::stable_sort(words.begin(), words.end(), [&](std::size_t a, std::size_t b) { return w.at(a, j) > w.at(b, j); });
  for (auto k : words) e.connected_words.emplace_back(vocab.word(k), w.at(k, j));
  return e;
}

std::vector<ClauseExplanation> explain_word(const TMAutoencoder& machine, std::string_view word, std::size_t top_t,
                                            const Vocabulary& vocab) {
  const WordId k = vocab.at(word);
  const auto row = machine.weights().row(k);
  std::vector<std::size_t> clauses;
  for (std::size_t j = 0; j < row.size(); ++j)
    if (row[j] > 0) clauses.push_back(j);
  std::stable_sort(clauses.begin(), clauses.end(), [&](std::size_t a, std::size_t b) { return row[a] > row[b]; });
  if (clauses.size() > top_t) clauses.resize(top_t);
  std::vector<ClauseExplanation> out;
  out.reserve(clauses.size());
  for (auto j : clauses) out.push_back(decode_clause(machine, j, vocab));
  return out;
}

std::string render_conjunction(const std::vector<std::string>& literals) {
  if (literals.empty()) return std::string(kEmptyConjunction);
  std::string s = literals.front();
  for (std::size_t i = 1; i < literals.size(); ++i) {
    s += kAnd;
    s += literals[i];
  }
  return s;
}

std::vector<std::string> parse_conjunction(std::string_view text) {
  text = trim(text);
  if (text == kEmptyConjunction) return {};
  std::vector<std::string> literals;
  while (true) {
    const auto pos = text.find('&');
    const auto literal = trim(text.substr(0, pos));
    if (literal.empty()) throw std::invalid_argument("empty literal in conjunction");
    literals.emplace_back(literal);
    if (pos == std::string_view::npos) break;
    text.remove_prefix(pos + 1);
  }
  return literals;
}

SparsityReport sparsity_report(const EmbeddingMatrices& emb) {
  SparsityReport r;
  const std::size_t n = emb.num_clauses();
  r.fractions.reserve(emb.binary.size());
  for (const auto& row : emb.binary)
    r.fractions.push_back(n ? static_cast<double>(row.count()) / static_cast<double>(n) : 0.0);
  if (r.fractions.empty()) return r;
  r.max = *std::max_element(r.fractions.begin(), r.fractions.end());
  r.mean = std::accumulate(r.fractions.begin(), r.fractions.end(), 0.0) / static_cast<double>(r.fractions.size());
  auto sorted = r.fractions;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  r.median = sorted.size() % 2 ? sorted[mid] : (sorted[mid - 1] + sorted[mid]) / 2.0;
  return r;
}

nlohmann::ordered_json to_json(const ClauseExplanation& e) {
  nlohmann::ordered_json j;
  j["clause"] = e.clause_id;
  j["literals"] = e.literals;
  j["conjunction"] = render_conjunction(e.literals);
  auto words = nlohmann::ordered_json::array();
  for (const auto& [w, weight] : e.connected_words) words.push_back({w, weight});
  j["words"] = std::move(words);
  return j;
}

}  // namespace tmembed
