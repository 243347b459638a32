#pragma once

// Minimal s-expression reader for the SyGuS-IF v1 fragment we emit and accept.
// Comments run from ';' to end of line.

#include <cctype>
#include <charconv>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reactsyn/errors.hpp"

namespace reactsyn {

struct Token {
  enum class Kind { Open, Close, Atom };
  Kind kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

// Splits text into parentheses and atoms, dropping whitespace and comments.
inline std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&] {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance();
    } else if (c == ';') {
      while (i < text.size() && text[i] != '\n') advance();
    } else if (c == '(' || c == ')') {
      out.push_back({c == '(' ? Token::Kind::Open : Token::Kind::Close, std::string(1, c), line, col});
      advance();
    } else if (c == '|') {
      const std::size_t l0 = line, c0 = col, start = i;
      advance();
      while (i < text.size() && text[i] != '|') advance();
      if (i >= text.size()) throw ParseError("unterminated quoted symbol", l0, c0);
      advance();
      out.push_back({Token::Kind::Atom, std::string(text.substr(start, i - start)), l0, c0});
    } else {
      const std::size_t l0 = line, c0 = col, start = i;
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) &&
             text[i] != '(' && text[i] != ')' && text[i] != ';') {
        advance();
      }
      out.push_back({Token::Kind::Atom, std::string(text.substr(start, i - start)), l0, c0});
    }
  }
  return out;
}

// Whitespace- and comment-insensitive token stream, the normative equality
// for comparing emitted specifications.
inline std::vector<std::string> token_stream(std::string_view text) {
  std::vector<std::string> out;
  for (auto& t : tokenize(text)) out.push_back(std::move(t.text));
  return out;
}

struct Sexpr {
  std::string atom;  // empty for lists
  std::vector<Sexpr> items;
  bool is_list = false;
  std::size_t line = 0;
  std::size_t column = 0;

  bool is_atom() const noexcept { return !is_list; }
  bool is_atom(std::string_view s) const noexcept { return !is_list && atom == s; }
  std::size_t size() const noexcept { return items.size(); }
  const Sexpr& operator[](std::size_t i) const { return items.at(i); }

  // Head symbol of a non-empty list whose first item is an atom, else empty.
  std::string_view head() const noexcept {
    if (is_list && !items.empty() && items.front().is_atom()) return items.front().atom;
    return {};
  }

  std::optional<long long> as_integer() const noexcept {
    if (is_list || atom.empty()) return std::nullopt;
    long long v = 0;
    const char* b = atom.data();
    const char* e = b + atom.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc{} || p != e) return std::nullopt;
    return v;
  }

  std::string to_string() const {
    if (!is_list) return atom;
    std::string s = "(";
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i) s += ' ';
      s += items[i].to_string();
    }
    return s + ")";
  }
};

namespace detail {

inline Sexpr read_one(const std::vector<Token>& toks, std::size_t& pos) {
  if (pos >= toks.size()) throw ParseError("unexpected end of input");
  const Token& t = toks[pos++];
  if (t.kind == Token::Kind::Close) throw ParseError("unexpected ')'", t.line, t.column);
  Sexpr e;
  e.line = t.line;
  e.column = t.column;
  if (t.kind == Token::Kind::Atom) {
    e.atom = t.text;
    return e;
  }
  e.is_list = true;
  while (true) {
    if (pos >= toks.size()) throw ParseError("unbalanced '('", t.line, t.column);
    if (toks[pos].kind == Token::Kind::Close) {
      ++pos;
      return e;
    }
    e.items.push_back(read_one(toks, pos));
  }
}

}  // namespace detail

// Reads every top-level expression in the text.
inline std::vector<Sexpr> parse_sexprs(std::string_view text) {
  const auto toks = tokenize(text);
  std::vector<Sexpr> out;
  std::size_t pos = 0;
  while (pos < toks.size()) out.push_back(detail::read_one(toks, pos));
  return out;
}

// Reads exactly one expression.
inline Sexpr parse_sexpr(std::string_view text) {
  auto all = parse_sexprs(text);
  if (all.size() != 1) {
    throw ParseError("expected exactly one s-expression, found " + std::to_string(all.size()));
  }
  return std::move(all.front());
}

}  // namespace reactsyn
