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
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tmembed/bitvector.hpp"

namespace tmembed {

using WordId = std::uint32_t;
using DocId = std::uint32_t;
using Document = std::vector<WordId>;  // strictly ascending

/// Lowercases, splits on runs of non-alphanumeric bytes and drops empty
/// tokens. Order of first occurrence is kept; duplicates are kept too
/// (documents collapse them later).
std::vector<std::string> tokenize(std::string_view text);

/// tokenize() collapsed to a sorted set.
std::vector<std::string> tokenize_set(std::string_view text);

class Vocabulary {
 public:
  Vocabulary() = default;
  /// Throws std::invalid_argument on duplicate or empty tokens.
  explicit Vocabulary(std::vector<std::string> words);

  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }

  const std::string& word(std::size_t k) const { return words_.at(k); }
  const std::vector<std::string>& words() const { return words_; }

  std::optional<WordId> find(std::string_view token) const;
  /// Throws std::out_of_range for unknown tokens.
  WordId at(std::string_view token) const;

  /// SHA-256 over the newline-joined word list.
  std::string hash() const;

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.words_ == b.words_; }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, WordId> index_;
};

struct VocabOptions {
  std::size_t min_df = 1;
  std::size_t max_vocab = 0;  // 0 = unlimited
  std::unordered_set<std::string> stopwords;
};

/// Keeps tokens with document frequency >= min_df, most frequent first,
/// ties broken lexicographically, truncated to max_vocab. The returned
/// vocabulary is ordered by that ranking. Throws std::runtime_error when
/// nothing survives.
Vocabulary build_vocab(std::span<const std::vector<std::string>> token_docs, const VocabOptions& options);

/// Bit i set iff word i is in the document.
BitVector vectorize(std::span<const WordId> doc, std::size_t num_words);

/// Ascending doc ids either listed in an inverted-index posting or its
/// complement within [0, num_docs). The complement is never materialised:
/// element r is located by binary search over the posting list.
class DocIdRange {
 public:
  DocIdRange(std::span<const DocId> posting, std::size_t num_docs, bool complement)
      : posting_(posting), num_docs_(num_docs), complement_(complement) {}

  std::size_t size() const { return complement_ ? num_docs_ - posting_.size() : posting_.size(); }
  bool empty() const { return size() == 0; }
  DocId operator[](std::size_t r) const;

  class iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = DocId;
    using difference_type = std::ptrdiff_t;
    using pointer = void;
    using reference = DocId;

    iterator() = default;
    iterator(const DocIdRange* range, std::size_t rank) : range_(range), rank_(rank) {}
    DocId operator*() const { return (*range_)[rank_]; }
    iterator& operator++() {
      ++rank_;
      return *this;
    }
    iterator operator++(int) {
      auto tmp = *this;
      ++rank_;
      return tmp;
    }
    friend bool operator==(const iterator& a, const iterator& b) { return a.rank_ == b.rank_; }

   private:
    const DocIdRange* range_ = nullptr;
    std::size_t rank_ = 0;
  };

  iterator begin() const { return {this, 0}; }
  iterator end() const { return {this, size()}; }

 private:
  std::span<const DocId> posting_;
  std::size_t num_docs_;
  bool complement_;
};

/// Documents as word-id sets plus the word -> doc inverted index.
class DocumentSet {
 public:
  DocumentSet() = default;
  /// Sorts and deduplicates each document. Throws std::out_of_range when a
  /// word id is >= num_words.
  DocumentSet(std::vector<Document> docs, std::size_t num_words);

  std::size_t num_docs() const { return docs_.size(); }
  std::size_t num_words() const { return num_words_; }
  const Document& doc(DocId id) const { return docs_.at(id); }
  const std::vector<Document>& docs() const { return docs_; }
  std::span<const DocId> posting(WordId k) const { return inverted_.at(k); }

  /// Docs containing word k (contain = true) or not containing it.
  DocIdRange docs_with(WordId k, bool contain) const;

  friend bool operator==(const DocumentSet& a, const DocumentSet& b) {
    return a.num_words_ == b.num_words_ && a.docs_ == b.docs_ && a.inverted_ == b.inverted_;
  }

 private:
  friend struct CorpusCacheAccess;
  std::size_t num_words_ = 0;
  std::vector<Document> docs_;
  std::vector<std::vector<DocId>> inverted_;
};

/// Maps tokenised documents onto a vocabulary; out-of-vocabulary tokens
/// are dropped.
DocumentSet index_documents(std::span<const std::vector<std::string>> token_docs, const Vocabulary& vocab);

/// One document per non-blank line.
std::vector<std::vector<std::string>> read_raw_corpus(std::istream& in,
                                                      const std::unordered_set<std::string>& stopwords = {});
std::vector<std::vector<std::string>> read_raw_corpus_file(const std::string& path,
                                                           const std::unordered_set<std::string>& stopwords = {});

/// Whitespace/newline separated tokens, normalised through tokenize().
std::unordered_set<std::string> load_stopwords(const std::string& path);

/// One token per line, line number = index.
void write_vocab_file(const std::string& path, const Vocabulary& vocab);
Vocabulary read_vocab_file(const std::string& path);

struct Corpus {
  Vocabulary vocab;
  DocumentSet docs;
};

inline constexpr char kCorpusMagic[4] = {'T', 'M', 'C', 'P'};
inline constexpr std::uint32_t kCorpusFormatVersion = 1;

/// Compiled corpus: magic, version, vocabulary, documents, inverted index.
void save_corpus_cache(std::ostream& out, const Corpus& corpus);
Corpus load_corpus_cache(std::istream& in);
void save_corpus_cache_file(const std::string& path, const Corpus& corpus);
Corpus load_corpus_cache_file(const std::string& path);
/// True when the file starts with the corpus cache magic.
bool is_corpus_cache(const std::string& path);

}  // namespace tmembed
