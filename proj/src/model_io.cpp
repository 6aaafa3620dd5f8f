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

#include "tmembed/model_io.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "tmembed/binary_io.hpp"

namespace tmembed {

void save_model(std::ostream& out, const TMAutoencoder& machine, const Vocabulary& vocab) {
  if (vocab.size() != machine.num_words()) throw std::invalid_argument("vocabulary size does not match model");
  const TMConfig& c = machine.config();
  out.write(kModelMagic, 4);
  io::write_pod(out, kModelFormatVersion);
  io::write_pod<std::uint64_t>(out, c.clauses);
  io::write_pod<std::int32_t>(out, c.margin);
  io::write_pod<double>(out, c.specificity);
  io::write_pod<std::int32_t>(out, c.depth);
  io::write_pod<std::uint8_t>(out, c.boost_true_positive ? 1 : 0);
  io::write_pod<std::uint64_t>(out, c.seed);
  io::write_pod<std::uint64_t>(out, machine.step());

  io::write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(vocab.size()));
  io::write_string(out, vocab.hash());
  for (const auto& w : vocab.words()) io::write_string(out, w);

  for (const auto& clause : machine.clauses()) {
    const auto pos = clause.positions();
    out.write(reinterpret_cast<const char*>(pos.data()), static_cast<std::streamsize>(pos.size()));
  }
  const auto w = machine.weights().data();
  out.write(reinterpret_cast<const char*>(w.data()), static_cast<std::streamsize>(w.size_bytes()));
  if (!out) throw std::runtime_error("failed writing model");
}

Model load_model(std::istream& in) {
  io::expect_magic(in, kModelMagic, "model");
  const auto version = io::read_pod<std::uint32_t>(in);
  if (version != kModelFormatVersion) throw std::runtime_error("unsupported model version " + std::to_string(version));

  TMConfig c;
  c.clauses = io::read_pod<std::uint64_t>(in);
  c.margin = io::read_pod<std::int32_t>(in);
  c.specificity = io::read_pod<double>(in);
  c.depth = io::read_pod<std::int32_t>(in);
  c.boost_true_positive = io::read_pod<std::uint8_t>(in) != 0;
  c.seed = io::read_pod<std::uint64_t>(in);
  const auto step = io::read_pod<std::uint64_t>(in);
  c.validate();

  const auto m = io::read_pod<std::uint32_t>(in);
  const std::string stored_hash = io::read_string(in);
  std::vector<std::string> words(m);
  for (auto& w : words) w = io::read_string(in);
  Vocabulary vocab(std::move(words));
  if (vocab.hash() != stored_hash) throw std::runtime_error("model vocabulary hash mismatch");

  std::vector<ClauseMemory> clauses;
  clauses.reserve(c.clauses);
  std::vector<std::uint8_t> buf(m);
  for (std::size_t j = 0; j < c.clauses; ++j) {
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(m));
    if (!in) throw std::runtime_error("unexpected end of file");
    ClauseMemory clause(m, c.depth);
    for (std::size_t i = 0; i < m; ++i) {
      if (buf[i] < 1 || buf[i] > 2 * c.depth) throw std::runtime_error("corrupted model: memory position out of range");
      clause.set_position(i, buf[i]);
    }
    clauses.push_back(std::move(clause));
  }
  WeightMatrix weights(m, c.clauses);
  auto w = weights.data();
  in.read(reinterpret_cast<char*>(w.data()), static_cast<std::streamsize>(w.size_bytes()));
  if (!in) throw std::runtime_error("unexpected end of file");
  return Model{TMAutoencoder(c, std::move(clauses), std::move(weights), step), std::move(vocab)};
}

void save_model_file(const std::string& path, const TMAutoencoder& machine, const Vocabulary& vocab) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write model: " + path);
  save_model(out, machine, vocab);
}

Model load_model_file(const std::string& path) {
  if (!std::filesystem::exists(path)) throw std::runtime_error("model file not found: " + path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model: " + path);
  return load_model(in);
}

}  // namespace tmembed
