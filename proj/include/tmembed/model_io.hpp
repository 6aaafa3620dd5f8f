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

// Model snapshot container (little-endian):
//
//   "TMAE"  u32 version
//   u64 clauses  i32 margin  f64 specificity  i32 depth  u8 boost  u64 seed
//   u64 update step
//   u32 m  string vocabulary-sha256  m x string word
//   n x m  u8 memory position (clause-major)
//   m x n  i32 weight (row-major)
//
// Strings are u32 length + bytes.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "tmembed/corpus.hpp"
#include "tmembed/tsetlin.hpp"

namespace tmembed {

inline constexpr char kModelMagic[4] = {'T', 'M', 'A', 'E'};
inline constexpr std::uint32_t kModelFormatVersion = 1;

struct Model {
  TMAutoencoder machine;
  Vocabulary vocab;
};

void save_model(std::ostream& out, const TMAutoencoder& machine, const Vocabulary& vocab);
/// Throws std::runtime_error on bad magic, version, truncation, corrupted
/// positions or a vocabulary hash mismatch.
Model load_model(std::istream& in);

void save_model_file(const std::string& path, const TMAutoencoder& machine, const Vocabulary& vocab);
Model load_model_file(const std::string& path);

}  // namespace tmembed
