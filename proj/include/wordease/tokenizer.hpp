#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace wordease {

enum class TokenKind { Word, Number, Symbol, Entity };

inline const char* to_string(TokenKind k) {
  switch (k) {
    case TokenKind::Word: return "WORD";
    case TokenKind::Number: return "NUMBER";
    case TokenKind::Symbol: return "SYMBOL";
    case TokenKind::Entity: return "ENTITY";
  }
  return "?";
}

struct Token {
  std::string text;
  std::size_t start = 0;  // byte offsets, [start, end)
  std::size_t end = 0;
  TokenKind kind = TokenKind::Word;

  friend bool operator==(const Token&, const Token&) = default;
};

namespace detail {

inline bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
inline bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
inline bool is_alnum(char c) { return is_alpha(c) || is_digit(c); }
inline bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

}  // namespace detail

/// Splits text into WORD / NUMBER / SYMBOL tokens.
///   WORD    maximal letter run; ' and - are kept when letters follow on both sides
///   NUMBER  maximal alphanumeric run containing a digit; . and , are kept
///           between digits ("3.14", "1,000")
///   SYMBOL  maximal run of anything else that is not whitespace
/// Bytes >= 0x80 are treated as symbol characters.
inline std::vector<Token> tokenize(std::string_view text) {
  using namespace detail;
  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const char c = text[i];
    if (is_space(c)) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (is_alnum(c)) {
      bool has_digit = false;
      while (i < n) {
        if (is_alnum(text[i])) {
          has_digit = has_digit || is_digit(text[i]);
          ++i;
        } else if ((text[i] == '\'' || text[i] == '-') && i + 1 < n && is_alpha(text[i - 1]) &&
                   is_alpha(text[i + 1])) {
          ++i;
        } else if ((text[i] == '.' || text[i] == ',') && i + 1 < n && is_digit(text[i - 1]) &&
                   is_digit(text[i + 1])) {
          ++i;
        } else {
          break;
        }
      }
      tokens.push_back({std::string(text.substr(start, i - start)), start, i,
                        has_digit ? TokenKind::Number : TokenKind::Word});
      continue;
    }
    while (i < n && !is_space(text[i]) && !is_alnum(text[i])) ++i;
    tokens.push_back({std::string(text.substr(start, i - start)), start, i, TokenKind::Symbol});
  }
  return tokens;
}

namespace detail {

inline bool ends_sentence(const Token& t) {
  return t.kind == TokenKind::Symbol && t.text.find_first_of(".!?") != std::string::npos;
}

inline bool is_pronoun_i(std::string_view w) {
  return w == "I" || w == "I'm" || w == "I'll" || w == "I've" || w == "I'd";
}

}  // namespace detail

/// Heuristic stand-in for named-entity recognition. A WORD becomes ENTITY when
/// it is all uppercase with length >= 2 ("NY"), or capitalised and not the
/// first word of a sentence ("Sam"). The pronoun "I" is left alone. NUMBER and
/// SYMBOL tokens are immutable by kind.
inline std::vector<Token> detect_immutable(std::vector<Token> tokens) {
  bool sentence_start = true;
  for (auto& t : tokens) {
    if (t.kind == TokenKind::Word) {
      bool any_upper = false;
      bool all_upper = true;
      for (char c : t.text) {
        if (!detail::is_alpha(c)) continue;
        const bool upper = std::isupper(static_cast<unsigned char>(c)) != 0;
        any_upper = any_upper || upper;
        all_upper = all_upper && upper;
      }
      const bool capitalised = std::isupper(static_cast<unsigned char>(t.text.front())) != 0;
      if (detail::is_pronoun_i(t.text)) {
        // stays WORD
      } else if (all_upper && any_upper && t.text.size() >= 2) {
        t.kind = TokenKind::Entity;
      } else if (capitalised && !sentence_start) {
        t.kind = TokenKind::Entity;
      }
      sentence_start = false;
    } else if (t.kind == TokenKind::Number) {
      sentence_start = false;
    } else if (detail::ends_sentence(t)) {
      sentence_start = true;
    }
  }
  return tokens;
}

inline bool is_immutable(TokenKind k) { return k != TokenKind::Word; }

}  // namespace wordease
