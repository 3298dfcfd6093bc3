#pragma once

#include <abemin/error.hpp>
#include <abemin/formula.hpp>

#include <cctype>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace abemin {

namespace detail {

// formula := or ; or := and ('|' and)* ; and := atom ('&' atom)* ;
// atom := IDENT | '(' or ')'
class FormulaParser {
public:
  explicit FormulaParser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    skip_space();
    if (pos_ == text_.size()) {
      throw ParseError("empty formula", pos_);
    }
    NodePtr node = parse_or();
    skip_space();
    if (pos_ != text_.size()) {
      unexpected();
    }
    return node;
  }

private:
  enum class Token { Ident, And, Or, Not, LParen, RParen, End, Invalid };

  static bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_';
  }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == ':';
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])) != 0) {
      ++pos_;
    }
  }

  std::string_view ident_at(std::size_t at) const {
    std::size_t end = at;
    while (end < text_.size() && ident_char(text_[end])) {
      ++end;
    }
    return text_.substr(at, end - at);
  }

  Token peek() {
    skip_space();
    if (pos_ == text_.size()) {
      return Token::End;
    }
    const char c = text_[pos_];
    switch (c) {
    case '&':
      return Token::And;
    case '|':
      return Token::Or;
    case '(':
      return Token::LParen;
    case ')':
      return Token::RParen;
    case '!':
    case '~':
    case '-':
    case '^':
      return Token::Not;
    default:
      break;
    }
    if (ident_start(c)) {
      const auto word = ident_at(pos_);
      if (word == "AND") {
        return Token::And;
      }
      if (word == "OR") {
        return Token::Or;
      }
      if (word == "NOT") {
        return Token::Not;
      }
      return Token::Ident;
    }
    return Token::Invalid;
  }

  // Length of the operator token at pos_ (symbol or keyword).
  std::size_t operator_length() const { return ident_start(text_[pos_]) ? ident_at(pos_).size() : 1; }

  [[noreturn]] void unexpected() {
    const Token t = peek();
    if (t == Token::Not) {
      throw NonMonotoneError("negation is not allowed in a monotone formula", pos_);
    }
    if (t == Token::End) {
      throw ParseError("unexpected end of input", pos_);
    }
    if (t == Token::Invalid) {
      throw ParseError(std::string("unexpected character '") + text_[pos_] + "'", pos_);
    }
    throw ParseError("unexpected token", pos_);
  }

  NodePtr parse_or() {
    std::vector<NodePtr> terms{parse_and()};
    while (peek() == Token::Or) {
      pos_ += operator_length();
      terms.push_back(parse_and());
    }
    return terms.size() == 1 ? terms.front() : Node::gate(NodeKind::Or, std::move(terms));
  }

  NodePtr parse_and() {
    std::vector<NodePtr> factors{parse_atom()};
    while (peek() == Token::And) {
      pos_ += operator_length();
      factors.push_back(parse_atom());
    }
    return factors.size() == 1 ? factors.front() : Node::gate(NodeKind::And, std::move(factors));
  }

  NodePtr parse_atom() {
    switch (peek()) {
    case Token::Ident: {
      const auto word = ident_at(pos_);
      pos_ += word.size();
      return Node::leaf(std::string(word));
    }
    case Token::LParen: {
      const std::size_t open = pos_;
      ++pos_;
      NodePtr inner = parse_or();
      if (peek() != Token::RParen) {
        if (peek() == Token::End) {
          throw ParseError("unbalanced '(' opened here", open);
        }
        unexpected();
      }
      ++pos_;
      return inner;
    }
    default:
      unexpected();
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

} // namespace detail

/// Parses formula text; '&'/'AND' bind tighter than '|'/'OR'.
inline Formula parse_formula(std::string_view text) {
  return Formula(detail::FormulaParser(text).parse());
}

/// True for blank lines and '#' comments in dataset files.
inline bool is_ignorable_line(std::string_view line) {
  const auto first = line.find_first_not_of(" \t\r\n");
  return first == std::string_view::npos || line[first] == '#';
}

/// Reads a dataset: one formula per line, '#' comments and blank lines skipped.
inline std::vector<Formula> read_formulas(std::istream& in) {
  std::vector<Formula> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (is_ignorable_line(line)) {
      continue;
    }
    try {
      out.push_back(parse_formula(line));
    } catch (const NonMonotoneError& e) {
      throw NonMonotoneError("negation is not allowed in a monotone formula", e.position(), number);
    } catch (const ParseError& e) {
      const std::string what = e.what();
      const auto colon = what.find(": ");
      throw ParseError(colon == std::string::npos ? what : what.substr(colon + 2), e.position(), number);
    }
  }
  return out;
}

} // namespace abemin
