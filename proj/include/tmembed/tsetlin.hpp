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

// Tsetlin machine autoencoder: a shared pool of conjunctive clauses over the
// vocabulary, an output-by-clause integer weight matrix, masked inference and
// the Type Ia / Ib / II feedback that learns both.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tmembed/bitvector.hpp"
#include "tmembed/random.hpp"

namespace tmembed {

using InputVector = BitVector;

enum class EvalMode { kTraining, kInference };

/// Forgotten (and Memorized) positions per variable unless configured.
inline constexpr int kDefaultDepth = 8;

/// Graded memory of one clause. Each variable sits at a position in
/// [1, 2d]; positions above d are Memorized and take part in the
/// conjunction, positions 1..d are Forgotten.
class ClauseMemory {
 public:
  static constexpr int kMaxDepth = 127;

  ClauseMemory() = default;
  /// All variables start at position d (topmost Forgotten).
  ClauseMemory(std::size_t num_vars, int depth);

  std::size_t size() const { return positions_.size(); }
  int depth() const { return depth_; }

  int position(std::size_t i) const { return positions_[i]; }
  void set_position(std::size_t i, int p);

  bool memorized(std::size_t i) const { return positions_[i] > depth_; }
  std::size_t memorized_count() const { return memorized_count_; }
  bool empty() const { return memorized_count_ == 0; }

  /// One step up / down, clamped to [1, 2d].
  void increment(std::size_t i);
  void decrement(std::size_t i);

  /// Packed Memorized set, one bit per variable.
  const BitVector& include() const { return include_; }
  std::vector<std::size_t> memorized_vars() const;

  std::span<const std::uint8_t> positions() const { return positions_; }

  friend bool operator==(const ClauseMemory&, const ClauseMemory&) = default;

 private:
  int depth_ = kDefaultDepth;
  std::vector<std::uint8_t> positions_;
  BitVector include_;
  std::size_t memorized_count_ = 0;
};

/// Integer weights, one row per output word and one column per clause.
class WeightMatrix {
 public:
  WeightMatrix() = default;
  WeightMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), w_(rows * cols, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::int32_t& at(std::size_t k, std::size_t j) { return w_[k * cols_ + j]; }
  std::int32_t at(std::size_t k, std::size_t j) const { return w_[k * cols_ + j]; }

  std::span<std::int32_t> row(std::size_t k) { return {w_.data() + k * cols_, cols_}; }
  std::span<const std::int32_t> row(std::size_t k) const { return {w_.data() + k * cols_, cols_}; }

  std::span<const std::int32_t> data() const { return w_; }
  std::span<std::int32_t> data() { return w_; }

  friend bool operator==(const WeightMatrix&, const WeightMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::int32_t> w_;
};

struct TMConfig {
  std::size_t clauses = 600;
  std::int32_t margin = 1200;
  double specificity = 5.0;
  int depth = kDefaultDepth;
  // Type Ia increments 1-valued variables with probability 1 instead of (s-1)/s.
  bool boost_true_positive = true;
  std::uint64_t seed = 1;

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;

  friend bool operator==(const TMConfig&, const TMConfig&) = default;
};

/// One self-supervised example: predict word k from input x; target is q.
struct TrainingExample {
  std::size_t k = 0;
  InputVector x;
  bool target = false;
};

enum class FeedbackType : std::uint8_t { kNone, kTypeIa, kTypeIb, kTypeII };

// Clause-level primitives. `masked` is the output index being predicted:
// it reads as 1 and its memory position is never touched.

bool clause_eval(const ClauseMemory& clause, const InputVector& x, std::size_t masked, EvalMode mode);

void type_ia_feedback(ClauseMemory& clause, const InputVector& x, std::size_t masked, double specificity,
                      SplitMix64& rng, bool boost_true_positive = true);
void type_ib_feedback(ClauseMemory& clause, const InputVector& x, std::size_t masked, double specificity,
                      SplitMix64& rng);
void type_ii_feedback(ClauseMemory& clause, const InputVector& x, std::size_t masked);

/// Feedback routing for one selected clause. Negative weights recognise
/// the opposite target, so the effective target is flipped for them;
/// w == 0 counts as positive.
FeedbackType select_feedback(bool target, bool clause_output, std::int32_t weight);

/// T - clip(v) for target 1, T + clip(v) for target 0.
double margin_error(std::int64_t v, bool target, std::int32_t margin);

struct UpdateResult {
  std::int64_t clause_sum = 0;
  double error = 0.0;
  std::size_t type_ia = 0;
  std::size_t type_ib = 0;
  std::size_t type_ii = 0;
};

class TMAutoencoder {
 public:
  /// Fresh machine: empty clauses, every weight independently +1 or -1.
  TMAutoencoder(TMConfig config, std::size_t num_words);
  /// Restores a machine from explicit state (used by the snapshot loader).
  TMAutoencoder(TMConfig config, std::vector<ClauseMemory> clauses, WeightMatrix weights, std::uint64_t step);

  const TMConfig& config() const { return config_; }
  std::size_t num_words() const { return num_words_; }
  std::size_t num_clauses() const { return clauses_.size(); }

  const ClauseMemory& clause(std::size_t j) const { return clauses_[j]; }
  ClauseMemory& clause(std::size_t j) { return clauses_[j]; }
  const std::vector<ClauseMemory>& clauses() const { return clauses_; }

  const WeightMatrix& weights() const { return weights_; }
  WeightMatrix& weights() { return weights_; }

  /// Number of updates applied so far; keys the per-clause random streams.
  std::uint64_t step() const { return step_; }

  /// Worker threads for the per-clause loops. Results do not depend on it.
  void set_threads(unsigned threads) { threads_ = threads == 0 ? 1 : threads; }
  unsigned threads() const { return threads_; }

  std::int64_t clause_sum(const InputVector& x, std::size_t k) const;
  bool predict_masked(const InputVector& x, std::size_t k) const;
  double margin_error(std::int64_t v, bool target) const {
    return tmembed::margin_error(v, target, config_.margin);
  }

  /// Applies one learning step. Each clause is selected independently with
  /// probability error / 2T and then receives exactly one feedback type.
  UpdateResult update(const TrainingExample& example);

  friend bool operator==(const TMAutoencoder& a, const TMAutoencoder& b) {
    return a.config_ == b.config_ && a.num_words_ == b.num_words_ && a.step_ == b.step_ &&
           a.clauses_ == b.clauses_ && a.weights_ == b.weights_;
  }

 private:
  template <typename Fn>
  void parallel_for_clauses(Fn&& fn) const;

  TMConfig config_;
  std::size_t num_words_ = 0;
  std::vector<ClauseMemory> clauses_;
  WeightMatrix weights_;
  std::uint64_t step_ = 0;
  unsigned threads_ = 1;
};

}  // namespace tmembed
