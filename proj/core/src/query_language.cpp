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

#include "vidseek/query_language.hpp"

#include <deque>

#include "vidseek/error.hpp"

namespace vidseek {

namespace {

bool is_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool is_separator(char c) noexcept { return c == '<' || c == '>'; }

bool is_letter(char c) noexcept {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool is_blank(std::string_view s) noexcept {
  for (char c : s) {
    if (!is_space(c)) return false;
  }
  return true;
}

enum class TokenKind { Word, Quoted, Separator };

struct Token {
  TokenKind kind;
  std::string text;
  std::size_t offset;
};

std::vector<Token> lex(std::string_view in) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < in.size()) {
    const char c = in[i];
    if (is_space(c)) {
      ++i;
    } else if (is_separator(c)) {
      tokens.push_back({TokenKind::Separator, std::string(1, c), i});
      ++i;
    } else if (c == '"') {
      const auto close = in.find('"', i + 1);
      if (close == std::string_view::npos) {
        throw ParseError(Errc::UnbalancedQuote, i,
                         "unterminated quote at offset " + std::to_string(i));
      }
      tokens.push_back(
          {TokenKind::Quoted, std::string(in.substr(i + 1, close - i - 1)), i});
      i = close + 1;
    } else {
      const std::size_t start = i;
      while (i < in.size() && !is_space(in[i]) && !is_separator(in[i]) &&
             in[i] != '"') {
        ++i;
      }
      tokens.push_back(
          {TokenKind::Word, std::string(in.substr(start, i - start)), start});
    }
  }
  return tokens;
}

struct Group {
  std::vector<Token> tokens;
  std::optional<std::size_t> opened_by;  // separator offset before the group
  std::optional<std::size_t> closed_by;  // separator offset after the group
};

Stage parse_stage(const Group& group) {
  Stage stage;
  std::string free_text;
  bool has_free = false;
  const auto& tokens = group.tokens;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    if (t.kind == TokenKind::Word && is_prefix_token(t.text)) {
      const auto modality = modality_from_prefix(t.text[1]);
      if (!modality) {
        throw ParseError(Errc::UnknownPrefix, t.offset,
                         "unknown prefix '" + t.text + "' at offset " +
                             std::to_string(t.offset));
      }
      const bool has_term =
          i + 1 < tokens.size() &&
          ((tokens[i + 1].kind == TokenKind::Word &&
            !is_prefix_token(tokens[i + 1].text)) ||
           (tokens[i + 1].kind == TokenKind::Quoted &&
            !is_blank(tokens[i + 1].text)));
      if (!has_term) {
        throw ParseError(Errc::DanglingPrefix, t.offset,
                         "prefix '" + t.text + "' at offset " +
                             std::to_string(t.offset) + " has no term");
      }
      stage.filters.push_back({*modality, tokens[i + 1].text});
      ++i;
      continue;
    }
    if (t.kind == TokenKind::Quoted && is_blank(t.text)) continue;
    if (has_free) free_text += ' ';
    free_text += t.text;
    has_free = true;
  }
  if (has_free) stage.free_text = std::move(free_text);
  if (!stage.free_text && stage.filters.empty()) {
    const std::size_t offset =
        group.closed_by.value_or(group.opened_by.value_or(0));
    throw ParseError(Errc::EmptyStage, offset,
                     "empty stage at offset " + std::to_string(offset));
  }
  return stage;
}

bool safe_free_text(const std::string& text) {
  if (text.empty()) return false;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto end = std::min(text.find(' ', i), text.size());
    const std::string_view word(text.data() + i, end - i);
    if (word.empty() || is_prefix_token(word)) return false;
    for (char c : word) {
      if (is_space(c) || is_separator(c) || c == '"') return false;
    }
    if (end == text.size()) break;
    i = end + 1;
    if (i == text.size()) return false;  // trailing space
  }
  return true;
}

bool safe_term(const std::string& term) {
  if (term.empty() || is_prefix_token(term)) return false;
  for (char c : term) {
    if (is_space(c) || is_separator(c) || c == '"') return false;
  }
  return true;
}

std::string quoted(const std::string& s) { return '"' + s + '"'; }

}  // namespace

bool is_prefix_token(std::string_view token) noexcept {
  return token.size() == 2 && token[0] == '-' && is_letter(token[1]);
}

std::vector<std::size_t> temporal_order(std::span<const char> separators) {
  std::deque<std::size_t> order{0};
  for (std::size_t i = 0; i < separators.size(); ++i) {
    if (separators[i] == '>') {
      order.push_front(i + 1);
    } else {
      order.push_back(i + 1);
    }
  }
  return {order.begin(), order.end()};
}

QueryAst parse_query(std::string_view input) {
  const auto tokens = lex(input);

  std::vector<Group> groups(1);
  std::vector<char> separators;
  for (const auto& t : tokens) {
    if (t.kind == TokenKind::Separator) {
      groups.back().closed_by = t.offset;
      separators.push_back(t.text[0]);
      groups.push_back(Group{{}, t.offset, std::nullopt});
    } else {
      groups.back().tokens.push_back(t);
    }
  }

  std::vector<Stage> operands;
  operands.reserve(groups.size());
  for (const auto& g : groups) operands.push_back(parse_stage(g));

  QueryAst ast;
  for (std::size_t idx : temporal_order(separators)) {
    ast.stages.push_back(std::move(operands[idx]));
  }
  return ast;
}

std::string render_query(const QueryAst& ast) {
  std::string out;
  for (std::size_t s = 0; s < ast.stages.size(); ++s) {
    if (s > 0) out += " < ";
    const Stage& stage = ast.stages[s];
    bool first = true;
    if (stage.free_text) {
      out += safe_free_text(*stage.free_text) ? *stage.free_text
                                              : quoted(*stage.free_text);
      first = false;
    }
    for (const auto& f : stage.filters) {
      if (!first) out += ' ';
      out += '-';
      out += prefix_letter(f.modality);
      out += ' ';
      out += safe_term(f.term) ? f.term : quoted(f.term);
      first = false;
    }
  }
  return out;
}

}  // namespace vidseek
