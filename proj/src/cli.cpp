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

#include "tmembed/cli.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "tmembed/corpus.hpp"
#include "tmembed/digest.hpp"
#include "tmembed/embedding.hpp"
#include "tmembed/evaluation.hpp"
#include "tmembed/interpret.hpp"
#include "tmembed/model_io.hpp"

namespace tmembed {

namespace {

using ordered_json = nlohmann::ordered_json;

struct GlobalOptions {
  std::uint64_t seed = 1;
  unsigned threads = 1;
  bool verbose = false;
};

struct VocabFlags {
  std::size_t min_df = 1;
  std::size_t max_vocab = 0;
  std::string stopwords;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--min-df", min_df, "Minimum document frequency")->check(CLI::PositiveNumber);
    cmd->add_option("--max-vocab", max_vocab, "Keep at most this many words (0 = all)");
    cmd->add_option("--stopwords", stopwords, "Stopword list, one token per line")->check(CLI::ExistingFile);
  }

  VocabOptions options() const {
    VocabOptions o;
    o.min_df = min_df;
    o.max_vocab = max_vocab;
    if (!stopwords.empty()) o.stopwords = load_stopwords(stopwords);
    return o;
  }
};

// Raw text corpus or compiled cache, with the vocabulary either read from
// a file or built from the documents.
Corpus load_corpus(const std::string& path, const std::string& vocab_path, const VocabFlags& flags) {
  if (is_corpus_cache(path)) return load_corpus_cache_file(path);
  const auto opts = flags.options();
  const auto token_docs = read_raw_corpus_file(path, opts.stopwords);
  Vocabulary vocab = vocab_path.empty() ? build_vocab(token_docs, opts) : read_vocab_file(vocab_path);
  DocumentSet docs = index_documents(token_docs, vocab);
  return Corpus{std::move(vocab), std::move(docs)};
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << body;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Logical word embeddings with a Tsetlin machine autoencoder", "tmembed"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  app.add_option("--seed", global.seed, "Random seed");
  app.add_option("--threads", global.threads, "Worker threads for training")->check(CLI::PositiveNumber);
  app.add_flag("--verbose", global.verbose, "Progress output on stderr");

  // build-vocab
  auto* build_cmd = app.add_subcommand("build-vocab", "Build a vocabulary (and optional corpus cache) from raw text");
  std::string bv_corpus, bv_out, bv_cache;
  VocabFlags bv_flags;
  build_cmd->add_option("--corpus", bv_corpus, "Raw corpus, one document per line")->required()->check(CLI::ExistingFile);
  build_cmd->add_option("--out", bv_out, "Vocabulary file to write")->required();
  build_cmd->add_option("--cache", bv_cache, "Also write a compiled binary corpus cache");
  bv_flags.add_to(build_cmd);

  // train
  auto* train_cmd = app.add_subcommand("train", "Train an autoencoder and write a model snapshot");
  std::string tr_corpus, tr_out, tr_vocab;
  EmbedConfig tr_config;
  tr_config.tm.seed = 0;
  VocabFlags tr_flags;
  train_cmd->add_option("--corpus", tr_corpus, "Raw corpus or compiled corpus cache")->required();
  train_cmd->add_option("--out", tr_out, "Model file to write")->required();
  train_cmd->add_option("--vocab", tr_vocab, "Vocabulary file (raw corpora only)")->check(CLI::ExistingFile);
  train_cmd->add_option("--clauses", tr_config.tm.clauses, "Clause count n")->capture_default_str();
  train_cmd->add_option("--margin", tr_config.tm.margin, "Margin T")->capture_default_str();
  train_cmd->add_option("--specificity", tr_config.tm.specificity, "Specificity s")->capture_default_str();
  train_cmd->add_option("--depth", tr_config.tm.depth, "Memory depth d per side")->capture_default_str();
  train_cmd->add_option("--accumulation", tr_config.accumulation, "Documents unioned per example u")
      ->capture_default_str();
  train_cmd->add_option("--rounds", tr_config.rounds, "Training rounds r")->capture_default_str();
  tr_flags.add_to(train_cmd);

  // export
  auto* export_cmd = app.add_subcommand("export", "Export embeddings from a model");
  std::string ex_model, ex_out, ex_format = "text";
  export_cmd->add_option("--model", ex_model, "Model file")->required();
  export_cmd->add_option("--out", ex_out, "Output path")->required();
  export_cmd->add_option("--format", ex_format, "text | binary | connections")
      ->check(CLI::IsMember({"text", "binary", "connections"}));

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Score a word-similarity dataset");
  std::string ev_model, ev_dataset, ev_report = "tsv";
  eval_cmd->add_option("--model", ev_model, "Model file")->required();
  eval_cmd->add_option("--dataset", ev_dataset, "Rows of 'word_a word_b score'")->required();
  eval_cmd->add_option("--report", ev_report, "tsv | json")->check(CLI::IsMember({"tsv", "json"}));

  // neighbors
  auto* nn_cmd = app.add_subcommand("neighbors", "Nearest words by cosine over E");
  std::string nn_model, nn_word;
  std::size_t nn_top = 10;
  nn_cmd->add_option("--model", nn_model, "Model file")->required();
  nn_cmd->add_option("--word", nn_word, "Query word")->required();
  nn_cmd->add_option("--top", nn_top, "Number of neighbors")->capture_default_str();

  // explain
  auto* explain_cmd = app.add_subcommand("explain", "Clauses connected to a word");
  std::string xp_model, xp_word, xp_format = "text";
  std::size_t xp_top = 11;
  explain_cmd->add_option("--model", xp_model, "Model file")->required();
  explain_cmd->add_option("--word", xp_word, "Word to explain")->required();
  explain_cmd->add_option("--top", xp_top, "Number of clauses")->capture_default_str();
  explain_cmd->add_option("--format", xp_format, "text | json")->check(CLI::IsMember({"text", "json"}));

  // clauses
  auto* clauses_cmd = app.add_subcommand("clauses", "Decode every clause with its connected words");
  std::string cl_model, cl_format = "text";
  std::int32_t cl_min_weight = 1;
  clauses_cmd->add_option("--model", cl_model, "Model file")->required();
  clauses_cmd->add_option("--min-weight", cl_min_weight, "Only list words with weight >= this")->capture_default_str();
  clauses_cmd->add_option("--format", cl_format, "text | json")->check(CLI::IsMember({"text", "json"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return 2;
  }

  try {
    if (build_cmd->parsed()) {
      const auto opts = bv_flags.options();
      const auto token_docs = read_raw_corpus_file(bv_corpus, opts.stopwords);
      Corpus corpus{build_vocab(token_docs, opts), {}};
      write_vocab_file(bv_out, corpus.vocab);
      if (!bv_cache.empty()) {
        corpus.docs = index_documents(token_docs, corpus.vocab);
        save_corpus_cache_file(bv_cache, corpus);
      }
      out << "vocabulary: " << corpus.vocab.size() << " words from " << token_docs.size() << " documents\n";
      return 0;
    }

    if (train_cmd->parsed()) {
      if (!std::filesystem::exists(tr_corpus)) throw std::runtime_error("corpus file not found: " + tr_corpus);
      tr_config.tm.seed = global.seed;
      tr_config.validate();
      const auto started = std::chrono::steady_clock::now();
      const Corpus corpus = load_corpus(tr_corpus, tr_vocab, tr_flags);

      TrainOptions topts;
      topts.threads = global.threads;
      if (global.verbose) {
        topts.on_round = [&](const RoundStats& s) {
          err << "round " << s.round + 1 << "/" << tr_config.rounds << " mean_error " << s.mean_error
              << " skipped " << s.skipped << '\n';
        };
      }
      const TrainResult result = train(corpus.docs, corpus.vocab, tr_config, topts);
      save_model_file(tr_out, result.machine, corpus.vocab);
      const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

      ordered_json manifest;
      manifest["format_version"] = 1;
      manifest["command"] = "train";
      manifest["config"] = {{"clauses", tr_config.tm.clauses},
                            {"margin", tr_config.tm.margin},
                            {"specificity", tr_config.tm.specificity},
                            {"depth", tr_config.tm.depth},
                            {"boost_true_positive", tr_config.tm.boost_true_positive},
                            {"accumulation", tr_config.accumulation},
                            {"rounds", tr_config.rounds}};
      manifest["seed"] = global.seed;
      manifest["threads"] = global.threads;
      manifest["corpus"] = {{"path", tr_corpus},
                            {"sha256", sha256_file(tr_corpus)},
                            {"documents", corpus.docs.num_docs()},
                            {"vocabulary_size", corpus.vocab.size()},
                            {"vocabulary_sha256", corpus.vocab.hash()}};
      manifest["vocabulary"] = {{"source", tr_vocab.empty() ? "built" : tr_vocab},
                                {"min_df", tr_flags.min_df},
                                {"max_vocab", tr_flags.max_vocab},
                                {"stopwords", tr_flags.stopwords}};
      manifest["model_sha256"] = sha256_file(tr_out);
      manifest["started_utc"] = utc_timestamp();
      manifest["wall_clock_seconds"] = seconds;
      manifest["skipped_examples"] = result.skipped;
      manifest["mean_error"] = result.mean_error;
      write_text_file(tr_out + ".manifest.json", manifest.dump(2) + "\n");

      out << "trained " << corpus.vocab.size() << " words x " << tr_config.tm.clauses << " clauses in "
          << tr_config.rounds << " rounds; final mean_error "
          << (result.mean_error.empty() ? 0.0 : result.mean_error.back()) << "; skipped " << result.skipped
          << '\n';
      return 0;
    }

    if (export_cmd->parsed()) {
      const Model model = load_model_file(ex_model);
      const auto emb = extract_embeddings(model.machine);
      std::ofstream file(ex_out, std::ios::binary | std::ios::trunc);
      if (!file) throw std::runtime_error("cannot write " + ex_out);
      if (ex_format == "text")
        write_weighted_text(file, emb, model.vocab);
      else if (ex_format == "binary")
        write_weighted_binary(file, emb, model.vocab);
      else
        write_connections(file, emb, model.vocab);
      return 0;
    }

    if (eval_cmd->parsed()) {
      const Model model = load_model_file(ev_model);
      const auto ds = read_similarity_dataset_file(ev_dataset);
      const auto report = evaluate_similarity(extract_embeddings(model.machine), model.vocab, ds);
      if (ev_report == "json") {
        ordered_json j;
        j["spearman"] = report.spearman;
        j["kendall"] = report.kendall;
        j["cosine"] = report.cosine_agreement;
        j["correlations_defined"] = report.correlations_defined;
        j["covered_pairs"] = report.covered_pairs;
        j["skipped_pairs"] = report.skipped_pairs;
        out << j.dump(2) << '\n';
      } else {
        out << "spearman\tkendall\tcosine\tcovered\tskipped\n"
            << std::setprecision(6) << report.spearman << '\t' << report.kendall << '\t'
            << report.cosine_agreement << '\t' << report.covered_pairs << '\t' << report.skipped_pairs << '\n';
      }
      return 0;
    }

    if (nn_cmd->parsed()) {
      const Model model = load_model_file(nn_model);
      for (const auto& n : nearest_neighbors(extract_embeddings(model.machine), model.vocab, nn_word, nn_top))
        out << n.word << '\t' << std::setprecision(6) << n.score << '\n';
      return 0;
    }

    if (explain_cmd->parsed()) {
      const Model model = load_model_file(xp_model);
      const WordId k = model.vocab.at(xp_word);
      const auto explanations = explain_word(model.machine, xp_word, xp_top, model.vocab);
      if (xp_format == "json") {
        auto arr = ordered_json::array();
        for (const auto& e : explanations) arr.push_back(to_json(e));
        ordered_json j;
        j["word"] = xp_word;
        j["clauses"] = std::move(arr);
        out << j.dump(2) << '\n';
      } else {
        for (const auto& e : explanations)
          out << '#' << e.clause_id << '\t' << model.machine.weights().at(k, e.clause_id) << '\t'
              << render_conjunction(e.literals) << '\n';
      }
      return 0;
    }

    if (clauses_cmd->parsed()) {
      const Model model = load_model_file(cl_model);
      auto arr = ordered_json::array();
      for (std::size_t j = 0; j < model.machine.num_clauses(); ++j) {
        auto e = decode_clause(model.machine, j, model.vocab);
        std::erase_if(e.connected_words, [&](const auto& p) { return p.second < cl_min_weight; });
        if (e.connected_words.empty()) continue;
        if (cl_format == "json") {
          arr.push_back(to_json(e));
          continue;
        }
        out << '#' << j << '\t' << render_conjunction(e.literals) << '\t';
        for (std::size_t i = 0; i < e.connected_words.size(); ++i)
          out << (i ? " " : "") << e.connected_words[i].first << ':' << e.connected_words[i].second;
        out << '\n';
      }
      if (cl_format == "json") out << arr.dump(2) << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace tmembed
