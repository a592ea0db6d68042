// Copyright 2026 The vidseek Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vidseek/text_encoder.hpp"

#include <cctype>
#include <fstream>

#include <nlohmann/json.hpp>

#include "vidseek/error.hpp"
#include "vidseek/hashing.hpp"
#include "vidseek/modality.hpp"

namespace vidseek {

std::vector<std::string> HashedTokenEncoder::tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      current += static_cast<char>(std::tolower(c));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<float> HashedTokenEncoder::token_direction(std::string_view token,
                                                       std::size_t dim) const {
  DeterministicRng rng(fnv1a64(token, seed_ ^ 0xcbf29ce484222325ULL));
  return rng.unit_vector(dim);
}

EmbeddingVector HashedTokenEncoder::encode(std::string_view text,
                                           std::size_t dim) const {
  auto tokens = tokenize(text);
  if (tokens.empty()) tokens.push_back(fold_case(text));
  std::vector<double> sum(dim, 0.0);
  for (const auto& t : tokens) {
    const auto dir = token_direction(t, dim);
    for (std::size_t i = 0; i < dim; ++i) sum[i] += dir[i];
  }
  std::vector<float> raw(dim);
  for (std::size_t i = 0; i < dim; ++i) raw[i] = static_cast<float>(sum[i]);
  return EmbeddingVector::normalize(raw);
}

LookupTextEncoder::LookupTextEncoder(std::unique_ptr<TextEncoder> fallback)
    : fallback_(std::move(fallback)) {}

void LookupTextEncoder::add(std::string text, std::vector<float> raw) {
  const std::size_t dim = raw.size();
  table_.insert_or_assign({std::move(text), dim},
                          EmbeddingVector::normalize(raw));
}

std::size_t LookupTextEncoder::load_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::ManifestInvalid,
                "cannot open text embeddings '" + path.string() + "'");
  }
  std::size_t count = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      add(j.at("text").get<std::string>(),
          j.at("vector").get<std::vector<float>>());
      ++count;
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::ManifestInvalid,
                  path.string() + ": " + e.what());
    }
  }
  return count;
}

EmbeddingVector LookupTextEncoder::encode(std::string_view text,
                                          std::size_t dim) const {
  if (const auto it = table_.find({std::string(text), dim}); it != table_.end()) {
    return it->second;
  }
  if (!fallback_) {
    throw Error(Errc::IndexUnavailable,
                "no embedding for query text '" + std::string(text) + "'");
  }
  return fallback_->encode(text, dim);
}

}  // namespace vidseek
