#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "finecc/error.hpp"

namespace finecc {

enum class TokenKind { Ident, Punct, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  SourcePos pos;
};

// Tokenizer shared by the schema and scenario readers. Identifiers are
// [A-Za-z_][A-Za-z0-9_]*; punctuation is one of { } ( ) ; : , . or ":=".
// "//" starts a comment running to end of line.
inline std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < text.size()) {
    char ch = text[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      advance(1);
      continue;
    }
    if (ch == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    SourcePos pos{line, col};
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) {
        ++j;
      }
      out.push_back({TokenKind::Ident, std::string(text.substr(i, j - i)), pos});
      advance(j - i);
      continue;
    }
    if (ch == ':' && i + 1 < text.size() && text[i + 1] == '=') {
      out.push_back({TokenKind::Punct, ":=", pos});
      advance(2);
      continue;
    }
    if (std::string_view("{}();:,.").find(ch) != std::string_view::npos) {
      out.push_back({TokenKind::Punct, std::string(1, ch), pos});
      advance(1);
      continue;
    }
    throw Error(ErrorKind::Syntax,
                std::string("unexpected character '") + ch + "'", pos);
  }
  out.push_back({TokenKind::End, "", SourcePos{line, col}});
  return out;
}

// Cursor over a token stream with the expect/accept helpers both readers use.
class TokenCursor {
 public:
  explicit TokenCursor(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t k = pos_ + ahead;
    return k < toks_.size() ? toks_[k] : toks_.back();
  }

  bool at_end() const { return peek().kind == TokenKind::End; }

  bool is(std::string_view text, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind != TokenKind::End && t.text == text;
  }

  bool accept(std::string_view text) {
    if (!is(text)) return false;
    ++pos_;
    return true;
  }

  const Token& expect(std::string_view text) {
    if (!is(text)) fail("expected '" + std::string(text) + "'");
    return toks_[pos_++];
  }

  const Token& expect_ident(std::string_view what = "identifier") {
    if (peek().kind != TokenKind::Ident) fail("expected " + std::string(what));
    return toks_[pos_++];
  }

  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string found = t.kind == TokenKind::End ? "end of input" : "'" + t.text + "'";
    throw Error(ErrorKind::Syntax, msg + ", found " + found, t.pos);
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace finecc
