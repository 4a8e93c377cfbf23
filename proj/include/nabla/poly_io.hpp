#pragma once

// Text form of polynomials.
//
//   expr     := term (('+'|'-') term)*
//   term     := factor ('*' factor)*
//   factor   := rational | var ('^' uint)? | '(' expr ')' | '-' factor
//   rational := int ('/' uint)?
//   var      := 'x' uint            (1-based, <= n)
//
// Whitespace is insignificant.  to_string writes terms in ascending graded-lex
// order, e.g. "2*x2^2 + x1*x4", "-x3", "3 - 1/2*x2^2".

#include "nabla/poly.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nabla {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : std::runtime_error(message + " at column " + std::to_string(position + 1)),
        position_(position) {}

  // 0-based offset into the parsed text.
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

namespace detail {

class PolynomialParser {
 public:
  PolynomialParser(std::string_view text, std::size_t n) : text_(text), n_(n) {}

  Polynomial parse() {
    Polynomial p = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool at_digit() const {
    return pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]));
  }

  std::string digits() {
    skip_ws();
    if (!at_digit()) fail("expected digits");
    std::size_t start = pos_;
    while (at_digit()) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  Polynomial expr() {
    Polynomial acc = term();
    for (;;) {
      if (accept('+'))
        acc += term();
      else if (accept('-'))
        acc -= term();
      else
        return acc;
    }
  }

  Polynomial term() {
    Polynomial acc = factor();
    while (accept('*')) acc *= factor();
    return acc;
  }

  Polynomial factor() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '-') {
      ++pos_;
      return -factor();
    }
    if (c == '(') {
      ++pos_;
      Polynomial inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (c == 'x') {
      std::size_t var_pos = pos_;
      ++pos_;
      if (!at_digit()) fail("expected variable index after 'x'");
      Integer idx(digits());
      if (idx < 1 || idx > n_) {
        pos_ = var_pos;
        fail("variable x" + idx.get_str() + " outside x1..x" + std::to_string(n_));
      }
      Polynomial v = Polynomial::variable(n_, idx.get_ui());
      if (accept('^')) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '-') fail("negative exponent");
        Integer e(digits());
        if (!e.fits_uint_p()) fail("exponent too large");
        Polynomial r = Polynomial::constant(n_, 1);
        for (unsigned long i = 0; i < e.get_ui(); ++i) r *= v;
        return r;
      }
      return v;
    }
    if (at_digit()) {
      Integer num(digits());
      Integer den(1);
      if (accept('/')) {
        std::size_t den_pos = pos_;
        den = Integer(digits());
        if (den == 0) {
          pos_ = den_pos;
          fail("zero denominator");
        }
      }
      Rational r(num, den);
      r.canonicalize();
      return Polynomial::constant(n_, r);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  std::size_t n_;
  std::size_t pos_ = 0;
};

inline std::string monomial_text(const Monomial& m) {
  std::string out;
  for (std::size_t i = 0; i < m.dimension(); ++i) {
    if (m[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += 'x' + std::to_string(i + 1);
    if (m[i] > 1) out += '^' + std::to_string(m[i]);
  }
  return out;
}

}  // namespace detail

inline Polynomial parse_polynomial(std::string_view text, std::size_t n) {
  return detail::PolynomialParser(text, n).parse();
}

inline std::string to_string(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : p.terms()) {
    bool negative = t.coefficient < 0;
    if (first)
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    first = false;
    Rational mag = abs(t.coefficient);
    if (t.monomial.is_one()) {
      out += mag.get_str();
    } else {
      if (mag != 1) out += mag.get_str() + "*";
      out += detail::monomial_text(t.monomial);
    }
  }
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << to_string(p); }

}  // namespace nabla
