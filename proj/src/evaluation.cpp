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

#include "tmembed/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

namespace tmembed {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double pearson(std::span<const double> a, std::span<const double> b) {
  const auto n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma, db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return kNaN;
  return sab / std::sqrt(saa * sbb);
}

// Sum of t(t-1)/2 over runs of equal values in a sorted sequence.
template <typename Eq>
std::uint64_t tied_pairs(std::size_t n, Eq&& equal_to_prev) {
  std::uint64_t total = 0, run = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i < n && equal_to_prev(i)) {
      ++run;
    } else {
      total += run * (run - 1) / 2;
      run = 1;
    }
  }
  return total;
}

// Bottom-up merge sort of v counting inversions (pairs i < j with v[i] > v[j]).
std::uint64_t sort_counting_swaps(std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<double> buf(n);
  std::uint64_t swaps = 0;
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t lo = 0; lo < n; lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, n), hi = std::min(lo + 2 * width, n);
      std::size_t i = lo, j = mid, out = lo;
      while (i < mid && j < hi) {
        if (v[j] < v[i]) {
          swaps += mid - i;
          buf[out++] = v[j++];
        } else {
          buf[out++] = v[i++];
        }
      }
      while (i < mid) buf[out++] = v[i++];
      while (j < hi) buf[out++] = v[j++];
    }
    v.swap(buf);
  }
  return swaps;
}

double kendall_tau_b(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x[a] != x[b] ? x[a] < x[b] : y[a] < y[b];
  });
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = y[order[i]];

  const std::uint64_t pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  const std::uint64_t x_ties = tied_pairs(n, [&](std::size_t i) { return x[order[i]] == x[order[i - 1]]; });
  const std::uint64_t joint_ties = tied_pairs(n, [&](std::size_t i) {
    return x[order[i]] == x[order[i - 1]] && y[order[i]] == y[order[i - 1]];
  });
  const std::uint64_t swaps = sort_counting_swaps(ys);
  const std::uint64_t y_ties = tied_pairs(n, [&](std::size_t i) { return ys[i] == ys[i - 1]; });

  if (x_ties == pairs || y_ties == pairs) return kNaN;
  const auto numerator = static_cast<double>(static_cast<std::int64_t>(pairs - x_ties - y_ties + joint_ties) -
                                             2 * static_cast<std::int64_t>(swaps));
  return numerator / std::sqrt(static_cast<double>(pairs - x_ties) * static_cast<double>(pairs - y_ties));
}

std::string lowercase(std::string s) {
  for (auto& c : s)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return s;
}

}  // namespace

Similarity cosine(std::span<const std::int32_t> a, std::span<const std::int32_t> b) {
  if (a.size() != b.size()) throw std::invalid_argument("cosine: vector lengths differ");
  std::int64_t dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += std::int64_t{a[i]} * b[i];
    na += std::int64_t{a[i]} * a[i];
    nb += std::int64_t{b[i]} * b[i];
  }
  if (na == 0 || nb == 0) return {0.0, true};
  const double c = static_cast<double>(dot) / std::sqrt(static_cast<double>(na) * static_cast<double>(nb));
  return {std::clamp(c, -1.0, 1.0), false};
}

Similarity cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("cosine: vector lengths differ");
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return {0.0, true};
  return {std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0), false};
}

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
    i = j + 1;
  }
  return ranks;
}

RankCorrelation rank_correlations(std::span<const double> predicted, std::span<const double> human) {
  if (predicted.size() != human.size()) throw std::invalid_argument("rank_correlations: lengths differ");
  if (predicted.size() < 2) throw std::invalid_argument("rank_correlations: need at least two values");
  RankCorrelation rc;
  const auto rp = average_ranks(predicted);
  const auto rh = average_ranks(human);
  rc.spearman = pearson(rp, rh);
  rc.kendall = kendall_tau_b(predicted, human);
  rc.defined = !std::isnan(rc.spearman) && !std::isnan(rc.kendall);
  if (!rc.defined) rc.spearman = rc.kendall = kNaN;
  return rc;
}

SimilarityDataset read_similarity_dataset(std::istream& in) {
  SimilarityDataset ds;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    WordPair p;
    std::string score;
    if (!(fields >> p.a >> p.b >> score))
      throw std::runtime_error("malformed similarity row at line " + std::to_string(line_no));
    try {
      std::size_t used = 0;
      p.score = std::stod(score, &used);
      if (used != score.size() || !std::isfinite(p.score)) throw std::invalid_argument("score");
    } catch (const std::exception&) {
      throw std::runtime_error("invalid similarity score at line " + std::to_string(line_no));
    }
    p.a = lowercase(std::move(p.a));
    p.b = lowercase(std::move(p.b));
    ds.pairs.push_back(std::move(p));
  }
  return ds;
}

SimilarityDataset read_similarity_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset: " + path);
  return read_similarity_dataset(in);
}

EvalReport evaluate_similarity(const EmbeddingMatrices& emb, const Vocabulary& vocab, const SimilarityDataset& ds) {
  std::vector<double> predicted, human;
  EvalReport report;
  for (const auto& p : ds.pairs) {
    const auto a = vocab.find(p.a);
    const auto b = vocab.find(p.b);
    if (!a || !b) {
      ++report.skipped_pairs;
      continue;
    }
    const auto s = cosine(emb.weighted.row(*a), emb.weighted.row(*b));
    if (s.zero_norm) {
      ++report.skipped_pairs;
      continue;
    }
    predicted.push_back(s.value);
    human.push_back(p.score);
  }
  report.covered_pairs = predicted.size();
  if (report.covered_pairs < 2)
    throw EvaluationError("fewer than two word pairs could be scored (" + std::to_string(report.skipped_pairs) +
                              " skipped)",
                          report.covered_pairs, report.skipped_pairs);
  const auto rc = rank_correlations(predicted, human);
  report.spearman = rc.spearman;
  report.kendall = rc.kendall;
  report.correlations_defined = rc.defined;
  report.cosine_agreement = cosine(std::span<const double>(predicted), std::span<const double>(human)).value;
  return report;
}

std::vector<Neighbor> nearest_neighbors(const EmbeddingMatrices& emb, const Vocabulary& vocab, std::string_view word,
                                        std::size_t top_t) {
  const WordId query = vocab.at(word);
  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(vocab.size());
  const auto q = emb.weighted.row(query);
  for (std::size_t k = 0; k < vocab.size(); ++k) {
    if (k == query) continue;
    scored.emplace_back(cosine(q, emb.weighted.row(k)).value, k);
  }
  const std::size_t t = std::min(top_t, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(t), scored.end(),
                    [](const auto& a, const auto& b) { return a.first != b.first ? a.first > b.first : a.second < b.second; });
  std::vector<Neighbor> out;
  out.reserve(t);
  for (std::size_t i = 0; i < t; ++i) out.push_back({vocab.word(scored[i].second), scored[i].first});
  return out;
}

}  // namespace tmembed
