#pragma once

// Exact linear algebra over Q for flattened polynomial tensor fields.
//
// Elimination is fraction-free (Bareiss) on integer rows obtained by clearing
// each row's denominators.  Pivots are the first nonzero entry in column order,
// so every result here is deterministic.

#include "nabla/poly.hpp"
#include "nabla/tensor.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nabla {

using RationalVector = std::vector<Rational>;

class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static RationalMatrix from_rows(const std::vector<RationalVector>& rows) {
    std::size_t c = rows.empty() ? 0 : rows.front().size();
    RationalMatrix m(rows.size(), c);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != c) throw DimensionMismatch("ragged rows");
      std::copy(rows[i].begin(), rows[i].end(), m.data_.begin() + i * c);
    }
    return m;
  }

  static RationalMatrix from_columns(const std::vector<RationalVector>& cols) {
    std::size_t r = cols.empty() ? 0 : cols.front().size();
    RationalMatrix m(r, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != r) throw DimensionMismatch("columns of different length");
      for (std::size_t i = 0; i < r; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  static RationalMatrix identity(std::size_t k) {
    RationalMatrix m(k, k);
    for (std::size_t i = 0; i < k; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  RationalVector column(std::size_t c) const {
    RationalVector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, c);
    return v;
  }

  RationalMatrix transpose() const {
    RationalMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  RationalVector operator*(const RationalVector& v) const {
    if (v.size() != cols_) throw DimensionMismatch("matrix-vector product: length mismatch");
    RationalVector out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (sgn(v[j]) != 0 && sgn((*this)(i, j)) != 0) out[i] += (*this)(i, j) * v[j];
    return out;
  }

  // Stacks `below` under this matrix; column counts must match.
  RationalMatrix stacked(const RationalMatrix& below) const {
    if (below.cols_ != cols_) throw DimensionMismatch("stacking matrices with different column counts");
    RationalMatrix m(rows_ + below.rows_, cols_);
    std::copy(data_.begin(), data_.end(), m.data_.begin());
    std::copy(below.data_.begin(), below.data_.end(), m.data_.begin() + data_.size());
    return m;
  }

  friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

inline bool is_zero_vector(const RationalVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return sgn(x) == 0; });
}

namespace detail {

// Integer echelon form produced by Bareiss elimination.
struct IntegerEchelon {
  std::size_t cols = 0;
  std::vector<std::vector<Integer>> rows;  // first rank rows are the pivot rows
  std::vector<std::size_t> pivots;         // pivot column of each pivot row
};

inline IntegerEchelon bareiss(const RationalMatrix& m) {
  IntegerEchelon e;
  e.cols = m.cols();
  e.rows.reserve(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Integer denom_lcm = 1;
    bool nonzero = false;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (sgn(m(i, j)) == 0) continue;
      nonzero = true;
      mpz_lcm(denom_lcm.get_mpz_t(), denom_lcm.get_mpz_t(), m(i, j).get_den_mpz_t());
    }
    if (!nonzero) continue;
    std::vector<Integer> row(m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (sgn(m(i, j)) != 0) row[j] = m(i, j).get_num() * (denom_lcm / m(i, j).get_den());
    e.rows.push_back(std::move(row));
  }

  auto& a = e.rows;
  Integer prev = 1;
  Integer tmp;
  std::size_t r = 0;
  for (std::size_t col = 0; col < e.cols && r < a.size(); ++col) {
    std::size_t p = r;
    while (p < a.size() && sgn(a[p][col]) == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[r]);
    const auto& piv = a[r];
    for (std::size_t i = r + 1; i < a.size(); ++i) {
      auto& row = a[i];
      bool lead = sgn(row[col]) != 0;
      for (std::size_t j = col + 1; j < e.cols; ++j) {
        // row[j] = (piv[col]*row[j] - row[col]*piv[j]) / prev
        if (lead && sgn(piv[j]) != 0) {
          row[j] *= piv[col];
          tmp = row[col] * piv[j];
          row[j] -= tmp;
        } else if (sgn(row[j]) != 0) {
          row[j] *= piv[col];
        } else {
          continue;
        }
        if (prev != 1) mpz_divexact(row[j].get_mpz_t(), row[j].get_mpz_t(), prev.get_mpz_t());
      }
      row[col] = 0;
    }
    prev = piv[col];
    e.pivots.push_back(col);
    ++r;
  }
  a.resize(r);
  return e;
}

}  // namespace detail

inline std::size_t rank(const RationalMatrix& m) { return detail::bareiss(m).pivots.size(); }

// Reduced row echelon form restricted to the nonzero rows.
struct Echelon {
  RationalMatrix reduced;            // rank x cols, pivot entries 1, zeros above and below
  std::vector<std::size_t> pivots;  // pivot column per row

  std::size_t rank() const { return pivots.size(); }
};

inline Echelon reduced_echelon(const RationalMatrix& m) {
  auto ie = detail::bareiss(m);
  std::size_t rk = ie.pivots.size();
  Echelon e{RationalMatrix(rk, m.cols()), ie.pivots};
  for (std::size_t i = 0; i < rk; ++i) {
    const Integer& lead = ie.rows[i][ie.pivots[i]];
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (sgn(ie.rows[i][j]) != 0) {
        e.reduced(i, j) = Rational(ie.rows[i][j], lead);
        e.reduced(i, j).canonicalize();
      }
  }
  for (std::size_t i = rk; i-- > 0;) {
    std::size_t pc = e.pivots[i];
    for (std::size_t k = 0; k < i; ++k) {
      Rational f = e.reduced(k, pc);
      if (sgn(f) == 0) continue;
      for (std::size_t j = pc; j < m.cols(); ++j)
        if (sgn(e.reduced(i, j)) != 0) e.reduced(k, j) -= f * e.reduced(i, j);
    }
  }
  return e;
}

// Basis of {v : M v = 0}; one vector per non-pivot column, with a 1 in that
// column.  Each vector is re-multiplied against M before being returned.
inline std::vector<RationalVector> kernel_basis(const RationalMatrix& m) {
  Echelon e = reduced_echelon(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<RationalVector> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    RationalVector v(m.cols());
    v[f] = 1;
    for (std::size_t i = 0; i < e.rank(); ++i) v[e.pivots[i]] = -e.reduced(i, f);
    if (!is_zero_vector(m * v)) throw std::logic_error("kernel certificate failed re-multiplication");
    basis.push_back(std::move(v));
  }
  return basis;
}

// Coefficients c with Σ c_i basis_i = v, or nullopt.  The certificate is
// re-substituted before being returned.
inline std::optional<RationalVector> in_span(const RationalVector& v, const std::vector<RationalVector>& basis) {
  for (const auto& b : basis)
    if (b.size() != v.size()) throw DimensionMismatch("in_span: vector length mismatch");
  if (basis.empty()) return is_zero_vector(v) ? std::optional<RationalVector>(RationalVector{}) : std::nullopt;
  std::vector<RationalVector> cols = basis;
  cols.push_back(v);
  RationalMatrix aug = RationalMatrix::from_columns(cols);
  Echelon e = reduced_echelon(aug);
  std::size_t last = basis.size();
  if (std::find(e.pivots.begin(), e.pivots.end(), last) != e.pivots.end()) return std::nullopt;
  RationalVector coeffs(basis.size());
  for (std::size_t i = 0; i < e.rank(); ++i) coeffs[e.pivots[i]] = e.reduced(i, last);
  RationalVector check(v.size());
  for (std::size_t j = 0; j < basis.size(); ++j)
    if (sgn(coeffs[j]) != 0)
      for (std::size_t i = 0; i < v.size(); ++i) check[i] += coeffs[j] * basis[j][i];
  if (check != v) throw std::logic_error("span certificate failed re-substitution");
  return coeffs;
}

struct SpanComparison {
  bool equal = false;
  std::size_t rank_a = 0;
  std::size_t rank_b = 0;
  std::vector<std::optional<RationalVector>> a_in_b;  // coefficients over b, per vector of a
  std::vector<std::optional<RationalVector>> b_in_a;
};

// span(a) == span(b) via mutual membership plus equal rank.
inline SpanComparison compare_spans(const std::vector<RationalVector>& a, const std::vector<RationalVector>& b) {
  SpanComparison s;
  s.rank_a = a.empty() ? 0 : rank(RationalMatrix::from_columns(a));
  s.rank_b = b.empty() ? 0 : rank(RationalMatrix::from_columns(b));
  bool ok = s.rank_a == s.rank_b;
  for (const auto& v : a) {
    s.a_in_b.push_back(in_span(v, b));
    ok = ok && s.a_in_b.back().has_value();
  }
  for (const auto& v : b) {
    s.b_in_a.push_back(in_span(v, a));
    ok = ok && s.b_in_a.back().has_value();
  }
  s.equal = ok;
  return s;
}

// ---------------------------------------------------------------------------
// Flattening

struct ManifestEntry {
  std::size_t component;  // flat tensor offset
  Monomial monomial;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
  friend auto operator<=>(const ManifestEntry& a, const ManifestEntry& b) {
    if (auto c = a.component <=> b.component; c != 0) return c;
    return a.monomial <=> b.monomial;
  }
};

struct Flattened {
  TensorShape shape;
  std::vector<ManifestEntry> manifest;  // row labels
  RationalMatrix matrix;                // column j = field j

  RationalVector column(std::size_t j) const { return matrix.column(j); }
  std::vector<RationalVector> columns() const {
    std::vector<RationalVector> out;
    for (std::size_t j = 0; j < matrix.cols(); ++j) out.push_back(matrix.column(j));
    return out;
  }
};

inline Flattened flatten(const std::vector<TensorField>& fields) {
  if (fields.empty()) throw std::invalid_argument("flatten: no fields");
  Flattened f{fields.front().shape(), {}, {}};
  for (const auto& t : fields) require_same_shape(f.shape, t.shape(), "flatten");
  for (const auto& t : fields)
    for (std::size_t c = 0; c < t.shape().component_count(); ++c)
      for (const auto& term : t[c].terms()) f.manifest.push_back({c, term.monomial});
  std::sort(f.manifest.begin(), f.manifest.end());
  f.manifest.erase(std::unique(f.manifest.begin(), f.manifest.end()), f.manifest.end());
  f.matrix = RationalMatrix(f.manifest.size(), fields.size());
  for (std::size_t j = 0; j < fields.size(); ++j) {
    const auto& t = fields[j];
    for (std::size_t c = 0; c < t.shape().component_count(); ++c)
      for (const auto& term : t[c].terms()) {
        auto it = std::lower_bound(f.manifest.begin(), f.manifest.end(), ManifestEntry{c, term.monomial});
        f.matrix(static_cast<std::size_t>(it - f.manifest.begin()), j) = term.coefficient;
      }
  }
  return f;
}

// Inverse of flatten for one column.
inline TensorField unflatten(const Flattened& f, std::size_t col) {
  TensorField t(f.shape);
  std::vector<std::vector<Term>> terms(f.shape.component_count());
  for (std::size_t i = 0; i < f.manifest.size(); ++i)
    if (sgn(f.matrix(i, col)) != 0) terms[f.manifest[i].component].push_back({f.manifest[i].monomial, f.matrix(i, col)});
  for (std::size_t c = 0; c < terms.size(); ++c)
    if (!terms[c].empty()) t[c] = Polynomial(f.shape.n, std::move(terms[c]));
  return t;
}

inline std::size_t rank_of(const std::vector<TensorField>& fields) { return rank(flatten(fields).matrix); }

}  // namespace nabla
