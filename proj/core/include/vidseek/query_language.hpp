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

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vidseek/modality.hpp"

namespace vidseek {

struct Filter {
  Modality modality = Modality::Concept;
  std::string term;

  friend bool operator==(const Filter&, const Filter&) = default;
};

/// One temporal step of a query: free text for the embedding index plus
/// metadata filters. Never empty.
struct Stage {
  std::optional<std::string> free_text;
  std::vector<Filter> filters;

  friend bool operator==(const Stage&, const Stage&) = default;
};

struct QueryAst {
  std::vector<Stage> stages;  // temporally earliest first
  /// Set by the caller (wire payload), never by the parser.
  std::optional<std::vector<std::string>> target_indexes;

  friend bool operator==(const QueryAst&, const QueryAst&) = default;
};

/// Parses the search-bar syntax:
///
///   query  := stage (('<' | '>') stage)*
///   stage  := item+
///   item   := '-' letter term | term
///   term   := word | '"' chars '"'
///
/// Unbound terms are space-joined into the stage's free text. Throws
/// ParseError with one of EmptyStage, UnknownPrefix, DanglingPrefix,
/// UnbalancedQuote and the byte offset of the offending character. The full
/// grammar is in docs/query_syntax.md.
QueryAst parse_query(std::string_view input);

/// Canonical text form; parse_query(render_query(ast)) == ast for every valid
/// AST whose target_indexes is unset.
std::string render_query(const QueryAst& ast);

/// Given the separator characters between stage operands (in input order),
/// returns operand indexes in temporal order. `a < b` keeps order, `a > b`
/// places b before a; chains fold left to right, so `>` prepends its right
/// operand to everything accumulated so far.
std::vector<std::size_t> temporal_order(std::span<const char> separators);

/// True for tokens of the form -X with X an ASCII letter.
bool is_prefix_token(std::string_view token) noexcept;

}  // namespace vidseek
