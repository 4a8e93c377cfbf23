#pragma once

// Multivariate polynomials over Q in the coordinates x1..xn.
//
// A Polynomial is a sorted vector of (Monomial, nonzero Rational) terms.  The
// sort key is graded-lexicographic on exponent vectors, ascending: lower total
// degree first, ties broken by lexicographic comparison of the exponent vector.
// Every constructor and operation returns the canonical form, so equality is
// plain term-vector equality.

#include "nabla/rational.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nabla {

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline void require_same_dimension(std::size_t a, std::size_t b, const char* what) {
  if (a != b)
    throw DimensionMismatch(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                            " vs " + std::to_string(b) + ")");
}

class Monomial {
 public:
  using Exponent = std::uint32_t;

  Monomial() = default;
  explicit Monomial(std::size_t n) : exps_(n, 0) {}
  explicit Monomial(std::vector<Exponent> exps) : exps_(std::move(exps)) {}

  // x_k with k 1-based.
  static Monomial variable(std::size_t n, std::size_t k) {
    if (k < 1 || k > n)
      throw std::out_of_range("variable index x" + std::to_string(k) + " outside 1.." +
                              std::to_string(n));
    Monomial m(n);
    m.exps_[k - 1] = 1;
    return m;
  }

  std::size_t dimension() const { return exps_.size(); }
  Exponent operator[](std::size_t i) const { return exps_[i]; }
  const std::vector<Exponent>& exponents() const { return exps_; }

  Exponent degree() const { return std::accumulate(exps_.begin(), exps_.end(), Exponent{0}); }
  bool is_one() const {
    return std::all_of(exps_.begin(), exps_.end(), [](Exponent e) { return e == 0; });
  }

  Monomial operator*(const Monomial& o) const {
    require_same_dimension(dimension(), o.dimension(), "monomial product");
    Monomial r(*this);
    for (std::size_t i = 0; i < exps_.size(); ++i) r.exps_[i] += o.exps_[i];
    return r;
  }

  friend bool operator==(const Monomial&, const Monomial&) = default;

  // Graded lexicographic.
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
    if (auto c = a.degree() <=> b.degree(); c != 0) return c;
    return a.exps_ <=> b.exps_;
  }

 private:
  std::vector<Exponent> exps_;
};

struct Term {
  Monomial monomial;
  Rational coefficient;

  friend bool operator==(const Term&, const Term&) = default;
};

class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::size_t n) : n_(n) {}

  // Accepts terms in any order, with repeats and zero coefficients.
  Polynomial(std::size_t n, std::vector<Term> terms) : n_(n), terms_(std::move(terms)) {
    for (const auto& t : terms_) require_same_dimension(n_, t.monomial.dimension(), "polynomial");
    normalize();
  }

  static Polynomial constant(std::size_t n, const Rational& c) {
    Polynomial p(n);
    if (c != 0) p.terms_.push_back({Monomial(n), c});
    if (c != 0) p.terms_.back().coefficient.canonicalize();
    return p;
  }
  static Polynomial constant(std::size_t n, long c) { return constant(n, Rational(c)); }

  static Polynomial variable(std::size_t n, std::size_t k) {
    Polynomial p(n);
    p.terms_.push_back({Monomial::variable(n, k), Rational(1)});
    return p;
  }

  static Polynomial term(const Monomial& m, const Rational& c) {
    Polynomial p(m.dimension());
    if (c != 0) p.terms_.push_back({m, c});
    if (c != 0) p.terms_.back().coefficient.canonicalize();
    return p;
  }

  std::size_t dimension() const { return n_; }
  std::span<const Term> terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  Monomial::Exponent degree() const {
    Monomial::Exponent d = 0;
    for (const auto& t : terms_) d = std::max(d, t.monomial.degree());
    return d;
  }

  Rational coefficient(const Monomial& m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const Term& t, const Monomial& key) { return t.monomial < key; });
    if (it != terms_.end() && it->monomial == m) return it->coefficient;
    return Rational(0);
  }

  Polynomial operator-() const {
    Polynomial r(*this);
    for (auto& t : r.terms_) t.coefficient = -t.coefficient;
    return r;
  }

  Polynomial operator+(const Polynomial& o) const { return merge(o, false); }
  Polynomial operator-(const Polynomial& o) const { return merge(o, true); }

  Polynomial operator*(const Polynomial& o) const {
    require_same_dimension(n_, o.n_, "polynomial product");
    Polynomial r(n_);
    if (is_zero() || o.is_zero()) return r;
    r.terms_.reserve(terms_.size() * o.terms_.size());
    for (const auto& a : terms_)
      for (const auto& b : o.terms_) r.terms_.push_back({a.monomial * b.monomial, a.coefficient * b.coefficient});
    r.normalize();
    return r;
  }

  Polynomial operator*(const Rational& c) const {
    Polynomial r(n_);
    if (c == 0) return r;
    r.terms_ = terms_;
    for (auto& t : r.terms_) t.coefficient *= c;
    return r;
  }
  friend Polynomial operator*(const Rational& c, const Polynomial& p) { return p * c; }

  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
  Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  // d/dx_k, k 1-based.
  Polynomial derivative(std::size_t k) const {
    if (k < 1 || k > n_)
      throw std::out_of_range("derivative index " + std::to_string(k) + " outside 1.." +
                              std::to_string(n_));
    Polynomial r(n_);
    for (const auto& t : terms_) {
      auto e = t.monomial[k - 1];
      if (e == 0) continue;
      auto exps = t.monomial.exponents();
      exps[k - 1] = e - 1;
      r.terms_.push_back({Monomial(std::move(exps)), t.coefficient * e});
    }
    // Lowering one exponent preserves the relative graded-lex order only within a
    // degree class, so re-sort.
    r.normalize();
    return r;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }

 private:
  void normalize() {
    for (auto& t : terms_) t.coefficient.canonicalize();
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& a, const Term& b) { return a.monomial < b.monomial; });
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
      if (!out.empty() && out.back().monomial == t.monomial)
        out.back().coefficient += t.coefficient;
      else
        out.push_back(std::move(t));
    }
    std::erase_if(out, [](const Term& t) { return t.coefficient == 0; });
    terms_ = std::move(out);
  }

  Polynomial merge(const Polynomial& o, bool subtract) const {
    require_same_dimension(n_, o.n_, subtract ? "polynomial difference" : "polynomial sum");
    Polynomial r(n_);
    r.terms_.reserve(terms_.size() + o.terms_.size());
    auto a = terms_.begin();
    auto b = o.terms_.begin();
    while (a != terms_.end() || b != o.terms_.end()) {
      if (b == o.terms_.end() || (a != terms_.end() && a->monomial < b->monomial)) {
        r.terms_.push_back(*a++);
      } else if (a == terms_.end() || b->monomial < a->monomial) {
        r.terms_.push_back({b->monomial, subtract ? Rational(-b->coefficient) : b->coefficient});
        ++b;
      } else {
        Rational c = subtract ? Rational(a->coefficient - b->coefficient)
                              : Rational(a->coefficient + b->coefficient);
        if (c != 0) r.terms_.push_back({a->monomial, std::move(c)});
        ++a;
        ++b;
      }
    }
    return r;
  }

  std::size_t n_ = 0;
  std::vector<Term> terms_;
};

inline Polynomial add(const Polynomial& a, const Polynomial& b) { return a + b; }
inline Polynomial mul(const Polynomial& a, const Polynomial& b) { return a * b; }
inline Polynomial partial_derivative(const Polynomial& a, std::size_t k) { return a.derivative(k); }

}  // namespace nabla
