#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "tagforge/error.hpp"

namespace tagforge::text {

enum class TokenType { word, quoted, punct, end };

struct Token {
  TokenType type = TokenType::end;
  std::string text;
  std::size_t line = 0;
  bool marked = false;  // quoted string followed directly by '@'

  bool is(std::string_view p) const { return type == TokenType::punct && text == p; }
  bool is_word(std::string_view w) const { return type == TokenType::word && text == w; }
};

/// Shared tokenizer for the text formats: whitespace separated words,
/// double-quoted strings, `#` line comments and a configurable set of
/// punctuation tokens (longest match first).
class Lexer {
 public:
  Lexer(std::string_view source, std::vector<std::string> puncts, std::string origin = "<input>")
      : origin_(std::move(origin)) {
    tokenize(source, puncts);
  }

  const Token& peek(std::size_t ahead = 0) const {
    return pos_ + ahead < tokens_.size() ? tokens_[pos_ + ahead] : tokens_.back();
  }
  Token next() {
    Token t = peek();
    if (pos_ < tokens_.size() - 1) ++pos_;
    return t;
  }
  bool at_end() const { return peek().type == TokenType::end; }

  bool accept(std::string_view punct) {
    if (peek().is(punct)) {
      next();
      return true;
    }
    return false;
  }

  bool accept_word(std::string_view word) {
    if (peek().is_word(word)) {
      next();
      return true;
    }
    return false;
  }

  void expect(std::string_view punct) {
    if (!accept(punct)) fail("expected '" + std::string(punct) + "'");
  }

  void expect_word(std::string_view word) {
    if (!accept_word(word)) fail("expected '" + std::string(word) + "'");
  }

  std::string word(std::string_view what = "a name") {
    if (peek().type != TokenType::word) fail("expected " + std::string(what));
    return next().text;
  }

  [[noreturn]] void fail(const std::string& message) const {
    const Token& t = peek();
    std::string found = t.type == TokenType::end ? "end of input" : "'" + t.text + "'";
    throw TagError(ErrorKind::syntax, origin_ + ":" + std::to_string(t.line) + ": " + message + ", found " + found);
  }

 private:
  void tokenize(std::string_view src, const std::vector<std::string>& puncts) {
    std::size_t line = 1;
    std::size_t i = 0;
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
    auto punct_at = [&](std::size_t at) -> std::size_t {
      std::size_t best = 0;
      for (const auto& p : puncts)
        if (p.size() > best && src.substr(at, p.size()) == p) best = p.size();
      return best;
    };
    while (i < src.size()) {
      char c = src[i];
      if (c == '\n') {
        ++line;
        ++i;
      } else if (is_space(c)) {
        ++i;
      } else if (c == '#') {
        while (i < src.size() && src[i] != '\n') ++i;
      } else if (c == '"') {
        std::string value;
        std::size_t start_line = line;
        ++i;
        for (;;) {
          if (i >= src.size())
            throw TagError(ErrorKind::syntax, origin_ + ":" + std::to_string(start_line) + ": unterminated string");
          char d = src[i++];
          if (d == '"') break;
          if (d == '\\' && i < src.size()) d = src[i++];
          if (d == '\n') ++line;
          value += d;
        }
        Token t{TokenType::quoted, std::move(value), start_line, false};
        if (i < src.size() && src[i] == '@') {
          t.marked = true;
          ++i;
        }
        tokens_.push_back(std::move(t));
      } else if (auto len = punct_at(i)) {
        tokens_.push_back({TokenType::punct, std::string(src.substr(i, len)), line, false});
        i += len;
      } else {
        std::size_t start = i;
        while (i < src.size() && !is_space(src[i]) && src[i] != '"' && src[i] != '#' && !punct_at(i)) ++i;
        tokens_.push_back({TokenType::word, std::string(src.substr(start, i - start)), line, false});
      }
    }
    tokens_.push_back({TokenType::end, {}, line, false});
  }

  std::string origin_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

inline std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace tagforge::text
