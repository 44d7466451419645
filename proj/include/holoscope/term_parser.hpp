#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "holoscope/term.hpp"

namespace holoscope {

/// Parse failure with a 1-based source position.
class ParseError : public Error {
 public:
  enum class Kind { Syntax, UnknownVariable, NonIntegerCoefficient, NonLinear };

  ParseError(Kind kind, int line, int column, const std::string& message)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        kind_(kind),
        line_(line),
        column_(column) {}

  Kind kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  Kind kind_;
  int line_;
  int column_;
};

namespace detail {

struct Token {
  enum class Type { Ident, Int, Punct, End } type;
  std::string text;
  int line;
  int column;
};

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t count) {
    for (std::size_t j = 0; j < count; ++j, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char ch = src[i];
    if (ch == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) {
      advance(1);
      continue;
    }
    const int l = line, c = col;
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({Token::Type::Ident, std::string(src.substr(i, j - i)), l, c});
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Token::Type::Int, std::string(src.substr(i, j - i)), l, c});
      advance(j - i);
    } else if (std::string_view("(),:*/^!+-").find(ch) != std::string_view::npos) {
      out.push_back({Token::Type::Punct, std::string(1, ch), l, c});
      advance(1);
    } else {
      throw ParseError(ParseError::Kind::Syntax, l, c, std::string("unexpected character '") + ch + "'");
    }
  }
  out.push_back({Token::Type::End, "", line, col});
  return out;
}

/// Affine form with rational coefficients during parsing; integrality is
/// checked once the whole form is read.
struct RationalForm {
  Rational n;
  std::vector<Rational> k;
  Rational constant;

  bool is_constant() const {
    if (n != 0) return false;
    for (const auto& c : k)
      if (c != 0) return false;
    return true;
  }
  RationalForm scaled(const Rational& s) const {
    RationalForm r = *this;
    r.n *= s;
    r.constant *= s;
    for (auto& c : r.k) c *= s;
    return r;
  }
  RationalForm plus(const RationalForm& o, int sign) const {
    RationalForm r = *this;
    r.n += sign * o.n;
    r.constant += sign * o.constant;
    for (std::size_t i = 0; i < r.k.size(); ++i) r.k[i] += sign * o.k[i];
    return r;
  }
};

class TermParser {
 public:
  explicit TermParser(std::string_view src) : toks_(tokenize(src)) {}

  BalancedTerm parse() {
    expect_ident("sum");
    term_.variables.push_back(expect_name());
    while (accept(","))
      term_.variables.push_back(expect_name());
    for (std::size_t i = 0; i < term_.variables.size(); ++i) {
      const auto& v = term_.variables[i];
      if (v == "n" || v == "binom" || v == "sum")
        fail(ParseError::Kind::Syntax, prev(), "'" + v + "' cannot be a summation variable");
      for (std::size_t j = 0; j < i; ++j)
        if (term_.variables[j] == v) fail(ParseError::Kind::Syntax, prev(), "duplicate summation variable '" + v + "'");
    }
    term_.c.assign(term_.variables.size(), Rational(1));
    expect(":");
    atom(+1);
    while (peek().type == Token::Type::Punct && (peek().text == "*" || peek().text == "/")) {
      int sign = next().text == "*" ? +1 : -1;
      atom(sign);
    }
    if (peek().type != Token::Type::End) fail(ParseError::Kind::Syntax, peek(), "unexpected '" + peek().text + "'");
    if (term_.factors.empty())
      fail(ParseError::Kind::Syntax, peek(), "a term needs at least one factorial or binomial factor");
    return term_;
  }

 private:
  using Type = Token::Type;

  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  const Token& prev() const { return toks_[pos_ ? pos_ - 1 : 0]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool is(const Token& t, std::string_view p) const { return t.type == Type::Punct && t.text == p; }
  bool accept(std::string_view p) {
    if (is(peek(), p)) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(ParseError::Kind kind, const Token& at, const std::string& msg) const {
    throw ParseError(kind, at.line, at.column, msg);
  }
  void expect(std::string_view p) {
    if (!accept(p))
      fail(ParseError::Kind::Syntax, peek(),
           "expected '" + std::string(p) + "' but found " + (peek().type == Type::End ? "end of input" : "'" + peek().text + "'"));
  }
  void expect_ident(std::string_view word) {
    if (peek().type != Type::Ident || peek().text != word)
      fail(ParseError::Kind::Syntax, peek(), "expected '" + std::string(word) + "'");
    ++pos_;
  }
  std::string expect_name() {
    if (peek().type != Type::Ident) fail(ParseError::Kind::Syntax, peek(), "expected a variable name");
    return next().text;
  }

  /// -1 for n, index for a summation variable.
  long variable_index(const Token& t) const {
    if (t.text == "n") return -1;
    for (std::size_t i = 0; i < term_.variables.size(); ++i)
      if (term_.variables[i] == t.text) return static_cast<long>(i);
    fail(ParseError::Kind::UnknownVariable, t, "unknown variable '" + t.text + "'");
  }

  long signed_integer() {
    int sign = 1;
    bool paren = accept("(");
    if (accept("-"))
      sign = -1;
    else
      accept("+");
    if (peek().type != Type::Int) fail(ParseError::Kind::Syntax, peek(), "expected an integer exponent");
    long v = sign * std::stol(next().text);
    if (paren) expect(")");
    return v;
  }

  long optional_exponent() { return accept("^") ? signed_integer() : 1; }

  void add_factorial(const LinearForm& f, long exponent, int sign) {
    int s = exponent < 0 ? -sign : sign;
    for (long i = 0; i < (exponent < 0 ? -exponent : exponent); ++i) term_.factors.push_back({f, s});
  }

  /// const "^" ident, with const an optionally signed, optionally
  /// parenthesized rational literal. Returns false (input untouched) if the
  /// lookahead is not a constant power.
  bool try_constant_power(int sign) {
    const std::size_t save = pos_;
    bool paren = accept("(");
    int s = 1;
    if (accept("-")) s = -1;
    if (peek().type != Type::Int) {
      pos_ = save;
      return false;
    }
    Integer num(next().text);
    Integer den = 1;
    if (is(peek(), "/") && peek(1).type == Type::Int && (paren || is(peek(2), "^"))) {
      ++pos_;
      den = Integer(next().text);
      if (den == 0) fail(ParseError::Kind::Syntax, prev(), "zero denominator");
    }
    if (paren && !accept(")")) {
      pos_ = save;
      return false;
    }
    if (!is(peek(), "^")) {
      if (paren) {
        pos_ = save;
        return false;
      }
      fail(ParseError::Kind::Syntax, peek(), "a constant must be raised to n or a summation variable");
    }
    ++pos_;
    if (peek().type != Type::Ident)
      fail(ParseError::Kind::Syntax, peek(), "a constant must be raised to n or a summation variable");
    const Token& var = next();
    long idx = variable_index(var);
    Rational value = make_rational(s * num, den);
    if (value == 0) fail(ParseError::Kind::Syntax, var, "constants must be nonzero");
    if (sign < 0) value = 1 / value;
    if (idx < 0)
      term_.c0 *= value;
    else
      term_.c[static_cast<std::size_t>(idx)] *= value;
    return true;
  }

  void atom(int sign) {
    const Token& t = peek();
    if (t.type == Type::Ident && t.text == "binom") {
      ++pos_;
      expect("(");
      LinearForm top = form();
      expect(",");
      LinearForm bottom = form();
      expect(")");
      long e = optional_exponent();
      add_factorial(top, e, sign);
      add_factorial(bottom, e, -sign);
      add_factorial(top - bottom, e, -sign);
      return;
    }
    if (t.type == Type::Ident) {
      ++pos_;
      long idx = variable_index(t);
      if (!is(peek(), "!")) fail(ParseError::Kind::Syntax, peek(), "expected '!' after '" + t.text + "'");
      ++pos_;
      LinearForm f = LinearForm::zero(term_.variables.size());
      if (idx < 0)
        f.coeff_n = 1;
      else
        f.coeff_k[static_cast<std::size_t>(idx)] = 1;
      add_factorial(f, optional_exponent(), sign);
      return;
    }
    if (try_constant_power(sign)) return;
    if (is(t, "(")) {
      const Token& open = next();
      LinearForm f = form();
      if (!is(peek(), ")"))
        fail(ParseError::Kind::Syntax, open,
             "unclosed '(': expected ')' but found " + (peek().type == Type::End ? std::string("end of input") : "'" + peek().text + "'"));
      ++pos_;
      if (!is(peek(), "!")) fail(ParseError::Kind::Syntax, peek(), "expected '!' after parenthesized form");
      ++pos_;
      add_factorial(f, optional_exponent(), sign);
      return;
    }
    fail(ParseError::Kind::Syntax, t, t.type == Type::End ? "unexpected end of input" : "unexpected '" + t.text + "'");
  }

  LinearForm form() {
    const Token& start = peek();
    RationalForm f = form_sum();
    LinearForm out = LinearForm::zero(term_.variables.size());
    auto to_long = [&](const Rational& q) {
      if (q.get_den() != 1) fail(ParseError::Kind::NonIntegerCoefficient, start, "non-integer form coefficient " + to_string(q));
      return q.get_num().get_si();
    };
    out.coeff_n = to_long(f.n);
    out.constant = to_long(f.constant);
    for (std::size_t i = 0; i < f.k.size(); ++i) out.coeff_k[i] = to_long(f.k[i]);
    return out;
  }

  RationalForm zero_form() const { return {0, std::vector<Rational>(term_.variables.size()), 0}; }

  RationalForm form_sum() {
    int sign = 1;
    if (accept("-"))
      sign = -1;
    else
      accept("+");
    RationalForm acc = zero_form().plus(form_product(), sign);
    while (is(peek(), "+") || is(peek(), "-")) {
      int s = next().text == "+" ? 1 : -1;
      acc = acc.plus(form_product(), s);
    }
    return acc;
  }

  RationalForm form_product() {
    RationalForm acc = form_primary();
    for (;;) {
      if (is(peek(), "*")) {
        // '*' followed by a factorial atom belongs to the outer product.
        const Token& op = next();
        RationalForm rhs = form_primary();
        if (!acc.is_constant() && !rhs.is_constant())
          fail(ParseError::Kind::NonLinear, op, "product of two non-constant forms");
        acc = acc.is_constant() ? rhs.scaled(acc.constant) : acc.scaled(rhs.constant);
      } else if (is(peek(), "/")) {
        const Token& op = next();
        RationalForm rhs = form_primary();
        if (!rhs.is_constant()) fail(ParseError::Kind::NonLinear, op, "division by a non-constant form");
        if (rhs.constant == 0) fail(ParseError::Kind::Syntax, op, "division by zero");
        acc = acc.scaled(1 / rhs.constant);
      } else if (peek().type == Type::Ident || is(peek(), "(")) {
        // juxtaposition such as "2n" or "3(n-k)"
        if (!acc.is_constant()) return acc;
        acc = form_primary().scaled(acc.constant);
      } else {
        return acc;
      }
    }
  }

  RationalForm form_primary() {
    const Token& t = peek();
    if (t.type == Type::Int) {
      ++pos_;
      RationalForm f = zero_form();
      f.constant = Rational(Integer(t.text));
      return f;
    }
    if (t.type == Type::Ident) {
      ++pos_;
      long idx = variable_index(t);
      RationalForm f = zero_form();
      if (idx < 0)
        f.n = 1;
      else
        f.k[static_cast<std::size_t>(idx)] = 1;
      return f;
    }
    if (is(t, "(")) {
      const Token& open = next();
      RationalForm f = form_sum();
      if (!is(peek(), ")")) fail(ParseError::Kind::Syntax, open, "unclosed '(': expected ')'");
      ++pos_;
      return f;
    }
    if (is(t, "-")) {
      ++pos_;
      return zero_form().plus(form_primary(), -1);
    }
    fail(ParseError::Kind::Syntax, t, t.type == Type::End ? "unexpected end of input in form" : "unexpected '" + t.text + "' in form");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  BalancedTerm term_;
};

}  // namespace detail

/// Parses the term DSL, e.g. "sum k: (n+k)!^2 * k!^-4 * (n-k)!^-2".
/// binom(B, D) desugars to B! * D!^-1 * (B-D)!^-1; X!^e is |e| copies of X!
/// with sign sgn(e); a constant raised to n (or to a summation variable k_i)
/// sets C0 (or C_i).
inline BalancedTerm parse_term(std::string_view text) {
  detail::TermParser p(text);
  BalancedTerm t = p.parse();
  t.validate();
  return t;
}

}  // namespace holoscope
