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

#include "tmembed/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <stdexcept>

#include "tmembed/binary_io.hpp"
#include "tmembed/digest.hpp"

namespace tmembed {

namespace {

// Bytes >= 0x80 belong to tokens so UTF-8 words survive intact.
bool is_token_byte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

char to_lower_ascii(unsigned char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
}

std::vector<std::string> filtered_set(std::string_view line, const std::unordered_set<std::string>& stopwords) {
  auto tokens = tokenize_set(line);
  if (!stopwords.empty()) std::erase_if(tokens, [&](const std::string& t) { return stopwords.contains(t); });
  return tokens;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (is_token_byte(c)) {
      current.push_back(to_lower_ascii(c));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<std::string> tokenize_set(std::string_view text) {
  auto tokens = tokenize(text);
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  return tokens;
}

Vocabulary::Vocabulary(std::vector<std::string> words) : words_(std::move(words)) {
  index_.reserve(words_.size());
  for (std::size_t k = 0; k < words_.size(); ++k) {
    if (words_[k].empty()) throw std::invalid_argument("vocabulary contains an empty token");
    if (!index_.emplace(words_[k], static_cast<WordId>(k)).second)
      throw std::invalid_argument("duplicate vocabulary token: " + words_[k]);
  }
}

std::optional<WordId> Vocabulary::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

WordId Vocabulary::at(std::string_view token) const {
  if (auto id = find(token)) return *id;
  throw std::out_of_range("word not in vocabulary: " + std::string(token));
}

std::string Vocabulary::hash() const {
  std::string joined;
  for (const auto& w : words_) {
    joined += w;
    joined.push_back('\n');
  }
  return sha256_hex(joined);
}

Vocabulary build_vocab(std::span<const std::vector<std::string>> token_docs, const VocabOptions& options) {
  if (options.min_df < 1) throw std::invalid_argument("min_df must be >= 1");
  std::map<std::string, std::size_t> df;
  for (const auto& doc : token_docs) {
    std::vector<std::string_view> seen(doc.begin(), doc.end());
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    for (auto t : seen) {
      if (t.empty() || options.stopwords.contains(std::string(t))) continue;
      ++df[std::string(t)];
    }
  }
  std::vector<std::pair<std::string, std::size_t>> kept;
  for (auto& [token, count] : df)
    if (count >= options.min_df) kept.emplace_back(token, count);
  std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (options.max_vocab > 0 && kept.size() > options.max_vocab) kept.resize(options.max_vocab);
  if (kept.empty()) throw std::runtime_error("vocabulary is empty after applying min_df/max_vocab");
  std::vector<std::string> words;
  words.reserve(kept.size());
  for (auto& [token, count] : kept) words.push_back(std::move(token));
  return Vocabulary(std::move(words));
}

BitVector vectorize(std::span<const WordId> doc, std::size_t num_words) {
  BitVector x(num_words);
  for (auto i : doc) {
    if (i >= num_words) throw std::out_of_range("document references word id beyond vocabulary");
    x.set(i);
  }
  return x;
}

DocId DocIdRange::operator[](std::size_t r) const {
  if (!complement_) return posting_[r];
  // Number of posting entries p_j with p_j - j <= r; those all precede the answer.
  std::size_t lo = 0, hi = posting_.size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (posting_[mid] - mid <= r)
      lo = mid + 1;
    else
      hi = mid;
  }
  return static_cast<DocId>(r + lo);
}

DocumentSet::DocumentSet(std::vector<Document> docs, std::size_t num_words)
    : num_words_(num_words), docs_(std::move(docs)), inverted_(num_words) {
  for (std::size_t d = 0; d < docs_.size(); ++d) {
    auto& doc = docs_[d];
    std::sort(doc.begin(), doc.end());
    doc.erase(std::unique(doc.begin(), doc.end()), doc.end());
    for (auto k : doc) {
      if (k >= num_words_) throw std::out_of_range("document references word id beyond vocabulary");
      inverted_[k].push_back(static_cast<DocId>(d));
    }
  }
}

DocIdRange DocumentSet::docs_with(WordId k, bool contain) const {
  if (k >= num_words_) throw std::out_of_range("word id out of range");
  return DocIdRange(inverted_[k], docs_.size(), !contain);
}

DocumentSet index_documents(std::span<const std::vector<std::string>> token_docs, const Vocabulary& vocab) {
  std::vector<Document> docs;
  docs.reserve(token_docs.size());
  for (const auto& tokens : token_docs) {
    Document doc;
    for (const auto& t : tokens)
      if (auto id = vocab.find(t)) doc.push_back(*id);
    docs.push_back(std::move(doc));
  }
  return DocumentSet(std::move(docs), vocab.size());
}

std::vector<std::vector<std::string>> read_raw_corpus(std::istream& in,
                                                      const std::unordered_set<std::string>& stopwords) {
  std::vector<std::vector<std::string>> docs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    docs.push_back(filtered_set(line, stopwords));
  }
  return docs;
}

std::vector<std::vector<std::string>> read_raw_corpus_file(const std::string& path,
                                                           const std::unordered_set<std::string>& stopwords) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus: " + path);
  return read_raw_corpus(in, stopwords);
}

std::unordered_set<std::string> load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open stopword list: " + path);
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line))
    for (auto& t : tokenize(line)) words.insert(std::move(t));
  return words;
}

void write_vocab_file(const std::string& path, const Vocabulary& vocab) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write vocabulary: " + path);
  for (const auto& w : vocab.words()) out << w << '\n';
}

Vocabulary read_vocab_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open vocabulary: " + path);
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    words.push_back(line);
  }
  return Vocabulary(std::move(words));
}

struct CorpusCacheAccess {
  static DocumentSet make(std::size_t num_words, std::vector<Document> docs, std::vector<std::vector<DocId>> inverted) {
    DocumentSet set;
    set.num_words_ = num_words;
    set.docs_ = std::move(docs);
    set.inverted_ = std::move(inverted);
    return set;
  }
};

void save_corpus_cache(std::ostream& out, const Corpus& corpus) {
  out.write(kCorpusMagic, 4);
  io::write_pod(out, kCorpusFormatVersion);
  io::write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(corpus.vocab.size()));
  for (const auto& w : corpus.vocab.words()) io::write_string(out, w);
  const auto& docs = corpus.docs.docs();
  io::write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(docs.size()));
  for (const auto& doc : docs) {
    io::write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(doc.size()));
    for (auto k : doc) io::write_pod(out, k);
  }
  for (std::size_t k = 0; k < corpus.vocab.size(); ++k) {
    const auto posting = corpus.docs.posting(static_cast<WordId>(k));
    io::write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(posting.size()));
    for (auto d : posting) io::write_pod(out, d);
  }
  if (!out) throw std::runtime_error("failed writing corpus cache");
}

Corpus load_corpus_cache(std::istream& in) {
  io::expect_magic(in, kCorpusMagic, "corpus cache");
  const auto version = io::read_pod<std::uint32_t>(in);
  if (version != kCorpusFormatVersion)
    throw std::runtime_error("unsupported corpus cache version " + std::to_string(version));
  const auto m = io::read_pod<std::uint32_t>(in);
  std::vector<std::string> words(m);
  for (auto& w : words) w = io::read_string(in);
  Vocabulary vocab(std::move(words));

  const auto num_docs = io::read_pod<std::uint32_t>(in);
  std::vector<Document> docs(num_docs);
  for (auto& doc : docs) {
    doc.resize(io::read_pod<std::uint32_t>(in));
    for (auto& k : doc) {
      k = io::read_pod<WordId>(in);
      if (k >= m) throw std::runtime_error("corrupted corpus cache: word id out of range");
    }
    if (!std::is_sorted(doc.begin(), doc.end()) || std::adjacent_find(doc.begin(), doc.end()) != doc.end())
      throw std::runtime_error("corrupted corpus cache: document is not a strictly ascending set");
  }
  std::vector<std::vector<DocId>> inverted(m);
  for (auto& posting : inverted) {
    posting.resize(io::read_pod<std::uint32_t>(in));
    for (auto& d : posting) d = io::read_pod<DocId>(in);
  }
  auto set = CorpusCacheAccess::make(m, std::move(docs), std::move(inverted));
  if (!(set == DocumentSet(set.docs(), m)))
    throw std::runtime_error("corrupted corpus cache: inverted index does not match documents");
  return Corpus{std::move(vocab), std::move(set)};
}

void save_corpus_cache_file(const std::string& path, const Corpus& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write corpus cache: " + path);
  save_corpus_cache(out, corpus);
}

Corpus load_corpus_cache_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open corpus cache: " + path);
  return load_corpus_cache(in);
}

bool is_corpus_cache(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  char buf[4] = {};
  in.read(buf, 4);
  return in && std::equal(buf, buf + 4, kCorpusMagic);
}

}  // namespace tmembed
