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

#include "tmembed/tsetlin.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

namespace tmembed {

namespace {

// Stream id reserved for weight initialisation; update streams use the step.
constexpr std::uint64_t kInitStream = ~std::uint64_t{0};

// Below this many clause-variable cells an update is cheaper than a thread spawn.
constexpr std::size_t kParallelThreshold = std::size_t{1} << 18;

// Number of indices skipped before the next success of a Bernoulli(p) trial.
std::size_t geometric_gap(SplitMix64& rng, double p) {
  if (p >= 1.0) return 0;
  const double u = 1.0 - rng.uniform();  // (0, 1]
  const double gap = std::floor(std::log(u) / std::log1p(-p));
  if (!(gap < 1e18)) return static_cast<std::size_t>(-1);
  return static_cast<std::size_t>(gap);
}

// Visits each index in [0, n) independently with probability p.
template <typename Fn>
void for_each_sampled(std::size_t n, double p, SplitMix64& rng, Fn&& fn) {
  if (p <= 0.0) return;
  std::size_t i = 0;
  while (true) {
    const std::size_t gap = geometric_gap(rng, p);
    if (gap >= n - i) return;
    i += gap;
    fn(i);
    if (++i >= n) return;
  }
}

}  // namespace

ClauseMemory::ClauseMemory(std::size_t num_vars, int depth)
    : depth_(depth), positions_(num_vars, static_cast<std::uint8_t>(depth)), include_(num_vars) {
  if (depth < 1 || depth > kMaxDepth)
    throw std::invalid_argument("memory depth must be in [1, " + std::to_string(kMaxDepth) + "]");
}

void ClauseMemory::set_position(std::size_t i, int p) {
  if (p < 1 || p > 2 * depth_) throw std::out_of_range("memory position out of [1, 2d]");
  const bool was = memorized(i);
  positions_[i] = static_cast<std::uint8_t>(p);
  const bool now = memorized(i);
  if (was != now) {
    include_.set(i, now);
    if (now)
      ++memorized_count_;
    else
      --memorized_count_;
  }
}

void ClauseMemory::increment(std::size_t i) {
  if (positions_[i] >= 2 * depth_) return;
  ++positions_[i];
  if (positions_[i] == depth_ + 1) {
    include_.set(i);
    ++memorized_count_;
  }
}

void ClauseMemory::decrement(std::size_t i) {
  if (positions_[i] <= 1) return;
  if (positions_[i] == depth_ + 1) {
    include_.reset(i);
    --memorized_count_;
  }
  --positions_[i];
}

std::vector<std::size_t> ClauseMemory::memorized_vars() const {
  std::vector<std::size_t> vars;
  vars.reserve(memorized_count_);
  include_.for_each_set([&](std::size_t i) { vars.push_back(i); });
  return vars;
}

void TMConfig::validate() const {
  if (clauses < 1) throw std::invalid_argument("clause count must be >= 1");
  if (margin < 1) throw std::invalid_argument("margin T must be >= 1");
  if (!(specificity > 1.0) || !std::isfinite(specificity))
    throw std::invalid_argument("specificity s must be a finite value > 1");
  if (depth < 1 || depth > ClauseMemory::kMaxDepth)
    throw std::invalid_argument("memory depth must be in [1, " + std::to_string(ClauseMemory::kMaxDepth) + "]");
}

bool clause_eval(const ClauseMemory& clause, const InputVector& x, std::size_t masked, EvalMode mode) {
  if (clause.empty()) return mode == EvalMode::kTraining;
  const auto inc = clause.include().words();
  const auto in = x.words();
  const std::size_t masked_word = masked / BitVector::kWordBits;
  const std::uint64_t masked_bit = std::uint64_t{1} << (masked % BitVector::kWordBits);
  for (std::size_t w = 0; w < inc.size(); ++w) {
    std::uint64_t missing = inc[w] & ~in[w];
    if (w == masked_word) missing &= ~masked_bit;
    if (missing) return false;
  }
  return true;
}

void type_ia_feedback(ClauseMemory& clause, const InputVector& x, std::size_t masked, double specificity,
                      SplitMix64& rng, bool boost_true_positive) {
  const double forget = 1.0 / specificity;
  const double memorize = boost_true_positive ? 1.0 : (specificity - 1.0) / specificity;
  x.for_each_set([&](std::size_t i) {
    if (i == masked) return;
    if (boost_true_positive || rng.bernoulli(memorize)) clause.increment(i);
  });
  for_each_sampled(clause.size(), forget, rng, [&](std::size_t i) {
    if (i != masked && !x.test(i)) clause.decrement(i);
  });
}

void type_ib_feedback(ClauseMemory& clause, const InputVector& /*x*/, std::size_t masked, double specificity,
                      SplitMix64& rng) {
  for_each_sampled(clause.size(), 1.0 / specificity, rng, [&](std::size_t i) {
    if (i != masked) clause.decrement(i);
  });
}

void type_ii_feedback(ClauseMemory& clause, const InputVector& x, std::size_t masked) {
  const std::size_t n = clause.size();
  const auto in = x.words();
  const auto inc = clause.include().words();
  // Candidates are 0-valued and Forgotten; collect first since increment()
  // rewrites the include words being scanned.
  std::vector<std::size_t> candidates;
  for (std::size_t w = 0; w < in.size(); ++w) {
    std::uint64_t bits = ~in[w] & ~inc[w];
    const std::size_t base = w * BitVector::kWordBits;
    if (n - base < BitVector::kWordBits) bits &= (std::uint64_t{1} << (n - base)) - 1;
    while (bits) {
      const std::size_t i = base + static_cast<std::size_t>(std::countr_zero(bits));
      bits &= bits - 1;
      if (i != masked) candidates.push_back(i);
    }
  }
  for (auto i : candidates) clause.increment(i);
}

FeedbackType select_feedback(bool target, bool clause_output, std::int32_t weight) {
  const bool effective = weight >= 0 ? target : !target;
  if (effective) return clause_output ? FeedbackType::kTypeIa : FeedbackType::kTypeIb;
  return clause_output ? FeedbackType::kTypeII : FeedbackType::kNone;
}

double margin_error(std::int64_t v, bool target, std::int32_t margin) {
  const std::int64_t t = margin;
  const std::int64_t clipped = std::clamp(v, -t, t);
  return static_cast<double>(target ? t - clipped : t + clipped);
}

TMAutoencoder::TMAutoencoder(TMConfig config, std::size_t num_words)
    : config_(config), num_words_(num_words) {
  config_.validate();
  if (num_words < 1) throw std::invalid_argument("vocabulary must contain at least one word");
  clauses_.assign(config_.clauses, ClauseMemory(num_words, config_.depth));
  weights_ = WeightMatrix(num_words, config_.clauses);
  SplitMix64 rng(SplitMix64::key(config_.seed, kInitStream, 0));
  for (auto& w : weights_.data()) w = (rng() >> 63) ? 1 : -1;
}

TMAutoencoder::TMAutoencoder(TMConfig config, std::vector<ClauseMemory> clauses, WeightMatrix weights,
                             std::uint64_t step)
    : config_(config), clauses_(std::move(clauses)), weights_(std::move(weights)), step_(step) {
  config_.validate();
  num_words_ = weights_.rows();
  if (clauses_.size() != config_.clauses || weights_.cols() != config_.clauses)
    throw std::invalid_argument("clause count does not match configuration");
  for (const auto& c : clauses_) {
    if (c.size() != num_words_ || c.depth() != config_.depth)
      throw std::invalid_argument("clause memory shape does not match weight matrix");
  }
}

template <typename Fn>
void TMAutoencoder::parallel_for_clauses(Fn&& fn) const {
  const std::size_t n = clauses_.size();
  const unsigned workers =
      (threads_ <= 1 || n * num_words_ < kParallelThreshold) ? 1u
                                                             : static_cast<unsigned>(std::min<std::size_t>(threads_, n));
  if (workers == 1) {
    fn(std::size_t{0}, n, 0u);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) {
    const std::size_t begin = n * t / workers;
    const std::size_t end = n * (t + 1) / workers;
    pool.emplace_back([&fn, begin, end, t] { fn(begin, end, t); });
  }
}

std::int64_t TMAutoencoder::clause_sum(const InputVector& x, std::size_t k) const {
  if (k >= num_words_) throw std::out_of_range("output index out of range");
  if (x.size() != num_words_) throw std::invalid_argument("input length does not match vocabulary size");
  const auto row = weights_.row(k);
  std::vector<std::int64_t> partial(std::max(threads_, 1u), 0);
  parallel_for_clauses([&](std::size_t begin, std::size_t end, unsigned t) {
    std::int64_t sum = 0;
    for (std::size_t j = begin; j < end; ++j) {
      if (clause_eval(clauses_[j], x, k, EvalMode::kInference)) sum += row[j];
    }
    partial[t] = sum;
  });
  std::int64_t total = 0;
  for (auto s : partial) total += s;
  return total;
}

bool TMAutoencoder::predict_masked(const InputVector& x, std::size_t k) const {
  return clause_sum(x, k) >= 0;
}

UpdateResult TMAutoencoder::update(const TrainingExample& example) {
  const std::size_t k = example.k;
  const InputVector& x = example.x;
  if (k >= num_words_) throw std::out_of_range("masked index out of range");
  if (x.size() != num_words_) throw std::invalid_argument("input length does not match vocabulary size");

  UpdateResult result;
  result.clause_sum = clause_sum(x, k);
  result.error = margin_error(result.clause_sum, example.target);
  const double p = result.error / (2.0 * config_.margin);

  struct Counts {
    std::size_t ia = 0, ib = 0, ii = 0;
  };
  std::vector<Counts> counts(std::max(threads_, 1u));
  const std::uint64_t step = step_;
  auto row = weights_.row(k);

  parallel_for_clauses([&](std::size_t begin, std::size_t end, unsigned t) {
    Counts local;
    for (std::size_t j = begin; j < end; ++j) {
      SplitMix64 rng(SplitMix64::key(config_.seed, step, j));
      if (!rng.bernoulli(p)) continue;
      ClauseMemory& clause = clauses_[j];
      const bool output = clause_eval(clause, x, k, EvalMode::kTraining);
      std::int32_t& w = row[j];
      const std::int32_t toward_polarity = w >= 0 ? 1 : -1;
      switch (select_feedback(example.target, output, w)) {
        case FeedbackType::kTypeIa:
          type_ia_feedback(clause, x, k, config_.specificity, rng, config_.boost_true_positive);
          w += toward_polarity;
          ++local.ia;
          break;
        case FeedbackType::kTypeIb:
          type_ib_feedback(clause, x, k, config_.specificity, rng);
          ++local.ib;
          break;
        case FeedbackType::kTypeII:
          type_ii_feedback(clause, x, k);
          w -= toward_polarity;
          ++local.ii;
          break;
        case FeedbackType::kNone:
          break;
      }
    }
    counts[t] = local;
  });

  for (const auto& c : counts) {
    result.type_ia += c.ia;
    result.type_ib += c.ib;
    result.type_ii += c.ii;
  }
  ++step_;
  return result;
}

}  // namespace tmembed
