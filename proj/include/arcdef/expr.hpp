#pragma once

#include <cctype>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "arcdef/poly.hpp"

namespace arcdef {

struct ParseError : DomainError {
  ParseError(const std::string& msg, int line, int col)
      : DomainError(msg + " at line " + std::to_string(line) + ", column " +
                    std::to_string(col)),
        line(line),
        col(col) {}
  int line, col;
};

// ---------------------------------------------------------------------------
// Expression AST
// ---------------------------------------------------------------------------

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  enum class Kind { Sum, Diff, Prod, Pow, Neg, Var, Lit };
  Kind kind;
  std::vector<ExprPtr> children;
  std::string name;   // Var
  Rational value;     // Lit
  uint32_t exponent = 0;  // Pow
  int line = 0, col = 0;  // source position, kept for Var diagnostics
};

namespace detail {
inline ExprPtr make_node(ExprNode n) {
  return std::make_shared<const ExprNode>(std::move(n));
}

struct Token {
  enum class Kind { Ident, Int, Plus, Minus, Star, Caret, Slash, LParen, RParen, End };
  Kind kind;
  std::string text;
  int line, col;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : s_(text) {}

  Token next() {
    while (pos_ < s_.size() && skippable(s_[pos_])) advance();
    int line = line_, col = col_;
    if (pos_ >= s_.size()) return {Token::Kind::End, "", line, col};
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string t;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        t += s_[pos_];
        advance();
      }
      return {Token::Kind::Int, t, line, col};
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string t;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
        t += s_[pos_];
        advance();
      }
      return {Token::Kind::Ident, t, line, col};
    }
    advance();
    switch (c) {
      case '+': return {Token::Kind::Plus, "+", line, col};
      case '-': return {Token::Kind::Minus, "-", line, col};
      case '*': return {Token::Kind::Star, "*", line, col};
      case '^': return {Token::Kind::Caret, "^", line, col};
      case '/': return {Token::Kind::Slash, "/", line, col};
      case '(': return {Token::Kind::LParen, "(", line, col};
      case ')': return {Token::Kind::RParen, ")", line, col};
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
  }

 private:
  static bool skippable(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  }
  void advance() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : lex_(text) { shift(); }

  ExprPtr parse() {
    ExprPtr e = parse_sum();
    expect(Token::Kind::End, "end of expression");
    return e;
  }

 private:
  ExprPtr parse_sum() {
    ExprPtr acc = parse_product();
    while (cur_.kind == Token::Kind::Plus || cur_.kind == Token::Kind::Minus) {
      bool minus = cur_.kind == Token::Kind::Minus;
      shift();
      ExprPtr rhs = parse_product();
      ExprNode n;
      n.kind = minus ? ExprNode::Kind::Diff : ExprNode::Kind::Sum;
      n.children = {acc, rhs};
      acc = make_node(std::move(n));
    }
    return acc;
  }

  ExprPtr parse_product() {
    ExprPtr acc = parse_factor();
    while (cur_.kind == Token::Kind::Star) {
      shift();
      ExprPtr rhs = parse_factor();
      ExprNode n;
      n.kind = ExprNode::Kind::Prod;
      n.children = {acc, rhs};
      acc = make_node(std::move(n));
    }
    return acc;
  }

  ExprPtr parse_factor() {
    if (cur_.kind == Token::Kind::Minus) {
      shift();
      ExprNode n;
      n.kind = ExprNode::Kind::Neg;
      n.children = {parse_factor()};
      return make_node(std::move(n));
    }
    return parse_power();
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_atom();
    if (cur_.kind == Token::Kind::Caret) {
      shift();
      Token t = expect(Token::Kind::Int, "integer exponent");
      ExprNode n;
      n.kind = ExprNode::Kind::Pow;
      n.children = {base};
      n.exponent = static_cast<uint32_t>(std::stoul(t.text));
      return make_node(std::move(n));
    }
    return base;
  }

  ExprPtr parse_atom() {
    if (cur_.kind == Token::Kind::Ident) {
      ExprNode n;
      n.kind = ExprNode::Kind::Var;
      n.name = cur_.text;
      n.line = cur_.line;
      n.col = cur_.col;
      shift();
      return make_node(std::move(n));
    }
    if (cur_.kind == Token::Kind::Int) {
      Rational num(Integer(cur_.text));
      shift();
      if (cur_.kind == Token::Kind::Slash) {
        shift();
        Token d = expect(Token::Kind::Int, "integer denominator");
        Integer den(d.text);
        if (den == 0) throw ParseError("division by zero", d.line, d.col);
        num /= Rational(den);
      }
      ExprNode n;
      n.kind = ExprNode::Kind::Lit;
      n.value = num;
      return make_node(std::move(n));
    }
    if (cur_.kind == Token::Kind::LParen) {
      shift();
      ExprPtr e = parse_sum();
      expect(Token::Kind::RParen, "')'");
      return e;
    }
    if (cur_.kind == Token::Kind::Slash)
      throw ParseError("'/' is only allowed between integer literals", cur_.line,
                       cur_.col);
    throw ParseError("expected identifier, number, or '('", cur_.line, cur_.col);
  }

  Token expect(Token::Kind k, const std::string& what) {
    if (cur_.kind != k)
      throw ParseError("expected " + what, cur_.line, cur_.col);
    Token t = cur_;
    shift();
    return t;
  }

  void shift() { cur_ = lex_.next(); }

  Lexer lex_;
  Token cur_;
};
}  // namespace detail

inline ExprPtr parse_expr(const std::string& text) {
  return detail::Parser(text).parse();
}

// Lower an AST to a polynomial over the declared alphabet.
inline QPoly lower(const ExprPtr& ast, const std::vector<std::string>& alphabet) {
  QPoly one(alphabet);
  one.add_term(Monomial(alphabet.size()), 1);
  switch (ast->kind) {
    case ExprNode::Kind::Sum:
      return lower(ast->children[0], alphabet) + lower(ast->children[1], alphabet);
    case ExprNode::Kind::Diff:
      return lower(ast->children[0], alphabet) - lower(ast->children[1], alphabet);
    case ExprNode::Kind::Prod:
      return lower(ast->children[0], alphabet) * lower(ast->children[1], alphabet);
    case ExprNode::Kind::Neg:
      return -lower(ast->children[0], alphabet);
    case ExprNode::Kind::Pow:
      return lower(ast->children[0], alphabet).pow(ast->exponent);
    case ExprNode::Kind::Lit:
      return one * ast->value;
    case ExprNode::Kind::Var: {
      QPoly p(alphabet);
      for (std::size_t i = 0; i < alphabet.size(); ++i)
        if (alphabet[i] == ast->name) {
          p.add_term(Monomial::unit(alphabet.size(), i), 1);
          return p;
        }
      throw ParseError("unknown variable '" + ast->name + "'", ast->line,
                       ast->col);
    }
  }
  throw DomainError("unreachable");
}

inline QPoly parse_poly(const std::string& text,
                        const std::vector<std::string>& alphabet) {
  return lower(parse_expr(text), alphabet);
}

// Parse a polynomial-in-t expression whose coefficients may involve the ring
// generators, into a series over the ring. Input must be polynomial in t;
// terms of t-degree >= T are truncated away.
inline PowerSeries parse_series(const std::string& text, const std::string& tvar,
                                const TestRing::Ptr& ring, std::size_t T) {
  std::vector<std::string> alphabet{tvar};
  for (const auto& g : ring->generators()) {
    if (g == tvar) throw DomainError("ring generator shadows the series variable");
    alphabet.push_back(g);
  }
  QPoly p = parse_poly(text, alphabet);
  PowerSeries s(ring, T);
  for (const auto& [m, c] : p.terms()) {
    std::size_t k = m.exp(0);
    if (k >= T) continue;
    std::vector<uint32_t> gexp(m.exps().begin() + 1, m.exps().end());
    s.set_coeff(k, s.coeff(k) + ring->monomial(Monomial(gexp), c));
  }
  return s;
}

// ---------------------------------------------------------------------------
// Canonical printing: terms by total degree then lex, rationals in lowest
// terms with positive denominator, unit coefficients elided.
// ---------------------------------------------------------------------------

inline std::string print_monomial(const Monomial& m,
                                  const std::vector<std::string>& vars) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (m.exp(i) == 0) continue;
    if (!first) os << "*";
    first = false;
    os << vars[i];
    if (m.exp(i) > 1) os << "^" << m.exp(i);
  }
  return os.str();
}

inline std::string print_poly(const QPoly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    Rational a = c;
    bool neg = a < 0;
    if (neg) a = -a;
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    std::string mono = print_monomial(m, p.variables());
    if (mono.empty()) {
      os << a;
    } else {
      if (a != 1) os << a << "*";
      os << mono;
    }
  }
  return os.str();
}

inline std::string print_ring_element(const RingElement& e) {
  return print_poly(ring_element_to_poly(e));
}

// Series printed as a polynomial in `var`, up to `display_terms` coefficients.
inline std::string print_series(const PowerSeries& s, const std::string& var,
                                std::size_t display_terms = 16) {
  std::size_t limit = std::min(display_terms, s.precision());
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = 0; k < limit; ++k) {
    const RingElement& c = s.coeff(k);
    if (c.is_zero()) continue;
    QPoly p = ring_element_to_poly(c);
    bool simple = p.terms().size() == 1;
    std::string cs = print_poly(p);
    if (!first) os << " + ";
    first = false;
    std::string body;
    if (k == 0) {
      body = simple ? cs : "(" + cs + ")";
    } else {
      std::string tpow = var + (k > 1 ? "^" + std::to_string(k) : "");
      if (cs == "1")
        body = tpow;
      else if (simple && cs.find(' ') == std::string::npos && cs[0] != '-')
        body = cs + "*" + tpow;
      else
        body = "(" + cs + ")*" + tpow;
    }
    os << body;
  }
  if (first) return "0";
  return os.str();
}

}  // namespace arcdef
