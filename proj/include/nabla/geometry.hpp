#pragma once

// Connection calculus on a single polynomial chart.
//
// Conventions (all indices 0-based internally, slots 1-based in the API):
//   Christoffel symbols  Γ^l_ij : ∇_{∂i} ∂j = Γ^l_ij ∂l, stored as a (2,1) field (i, j; l).
//   Torsion              Tor^l_ij = Γ^l_ij - Γ^l_ji.
//   Curvature            R^l_ijk  = ∂i Γ^l_jk - ∂j Γ^l_ik + Γ^m_jk Γ^l_im - Γ^m_ik Γ^l_jm,
//                        so that R(∂i, ∂j) ∂k = R^l_ijk ∂l.
//   Covariant derivative (∇T)(..., k) appends the differentiation direction as the
//                        last covariant slot.
//   Forms                a vector-valued k-form is a (k,1) field alternating in its k
//                        slots; an End-valued k-form is a (k+1,1) field whose last
//                        covariant slot is the endomorphism input.
//   d_∇                  coordinate-frame formula, e.g. for a vector-valued 2-form
//                        (d_∇α)^l_ijk = Σ_cyc(ijk) [∂i α^l_jk + Γ^l_im α^m_jk].

#include "nabla/poly_io.hpp"
#include "nabla/tensor.hpp"

#include <json.hpp>

#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace nabla {

class Connection {
 public:
  explicit Connection(std::size_t n) : gamma_(TensorShape{2, 1, n}) {
    if (n == 0) throw std::invalid_argument("connection dimension must be positive");
  }

  // From a (2,1) field laid out as (i, j; l).
  explicit Connection(TensorField christoffel) : gamma_(std::move(christoffel)) {
    if (gamma_.shape().p != 2 || gamma_.shape().q != 1)
      throw ShapeMismatch("Christoffel symbols must form a (2,1) array");
  }

  std::size_t dimension() const { return gamma_.dimension(); }

  // Γ^l_ij, 1-based.
  void set(std::size_t l, std::size_t i, std::size_t j, Polynomial value) {
    require_same_dimension(dimension(), value.dimension(), "Christoffel symbol");
    gamma_.at({i, j}, {l}) = std::move(value);
  }
  const Polynomial& christoffel(std::size_t l, std::size_t i, std::size_t j) const { return gamma_.at({i, j}, {l}); }

  // Γ^l_ij, 0-based.
  const Polynomial& g(std::size_t l, std::size_t i, std::size_t j) const {
    std::size_t n = dimension();
    return gamma_[(i * n + j) * n + l];
  }

  const TensorField& christoffel_field() const { return gamma_; }

  bool is_flat_chart() const { return gamma_.is_zero(); }

  friend bool operator==(const Connection& a, const Connection& b) {
    return a.dimension() == b.dimension() && equal(a.gamma_, b.gamma_);
  }

 private:
  TensorField gamma_;
};

inline Connection flat_connection(std::size_t n) { return Connection(n); }

// Γ¹₁₂ = x3, Γ³₄₃ = x1 x4, Γ³₃₁ = x2 x4 on R^4.
inline Connection reference_connection() {
  Connection c(4);
  c.set(1, 1, 2, parse_polynomial("x3", 4));
  c.set(3, 4, 3, parse_polynomial("x1*x4", 4));
  c.set(3, 3, 1, parse_polynomial("x2*x4", 4));
  return c;
}

// Γ^l_ij -> (Γ^l_ij + Γ^l_ji)/2.
inline Connection symmetrized(const Connection& c) {
  const TensorField& g = c.christoffel_field();
  TensorField sym = (g + permute_covariant(g, {2, 1})) * Rational(1, 2);
  return Connection(std::move(sym));
}

// ---------------------------------------------------------------------------
// Forms

namespace detail {

inline bool fully_antisymmetric(const TensorField& t, std::size_t slots) {
  for (std::size_t a = 1; a <= slots; ++a)
    for (std::size_t b = a + 1; b <= slots; ++b)
      if (!t.is_antisymmetric(a, b)) return false;
  return true;
}

inline TensorField& declare_form_slots(TensorField& t, std::size_t slots) {
  for (std::size_t a = 1; a <= slots; ++a)
    for (std::size_t b = a + 1; b <= slots; ++b) t.declare_antisymmetric(a, b);
  return t;
}

}  // namespace detail

class FormError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// (k,1) field alternating in all k covariant slots.
class VectorValuedForm {
 public:
  VectorValuedForm(std::size_t degree, TensorField field) : degree_(degree), field_(std::move(field)) {
    const auto& s = field_.shape();
    if (s.p != degree_ || s.q != 1)
      throw FormError("vector-valued " + std::to_string(degree_) + "-form needs shape (" + std::to_string(degree_) +
                      ",1), got " + to_string(s));
    if (!detail::fully_antisymmetric(field_, degree_))
      throw FormError("field is not alternating in its " + std::to_string(degree_) + " form slots");
    field_.clear_antisymmetry();
    detail::declare_form_slots(field_, degree_);
  }

  std::size_t degree() const { return degree_; }
  std::size_t dimension() const { return field_.dimension(); }
  const TensorField& field() const { return field_; }

  VectorValuedForm operator+(const VectorValuedForm& o) const { return {degree_, field_ + o.field_}; }
  VectorValuedForm operator-(const VectorValuedForm& o) const { return {degree_, field_ - o.field_}; }
  VectorValuedForm operator*(const Rational& c) const { return {degree_, field_ * c}; }

 private:
  std::size_t degree_;
  TensorField field_;
};

// (k+1,1) field: slots (form_1..form_k, endo-input; endo-output), alternating in
// the k form slots only.
class EndValuedForm {
 public:
  EndValuedForm(std::size_t degree, TensorField field) : degree_(degree), field_(std::move(field)) {
    const auto& s = field_.shape();
    if (s.p != degree_ + 1 || s.q != 1)
      throw FormError("End-valued " + std::to_string(degree_) + "-form needs shape (" + std::to_string(degree_ + 1) +
                      ",1), got " + to_string(s));
    if (!detail::fully_antisymmetric(field_, degree_))
      throw FormError("field is not alternating in its " + std::to_string(degree_) + " form slots");
    field_.clear_antisymmetry();
    detail::declare_form_slots(field_, degree_);
  }

  std::size_t degree() const { return degree_; }
  std::size_t dimension() const { return field_.dimension(); }
  const TensorField& field() const { return field_; }

  EndValuedForm operator+(const EndValuedForm& o) const { return {degree_, field_ + o.field_}; }
  EndValuedForm operator-(const EndValuedForm& o) const { return {degree_, field_ - o.field_}; }
  EndValuedForm operator*(const Rational& c) const { return {degree_, field_ * c}; }

 private:
  std::size_t degree_;
  TensorField field_;
};

// The identity endomorphism viewed as a vector-valued 1-form, I^l_j = δ^l_j.
inline VectorValuedForm identity_form(std::size_t n) { return {1, TensorField::delta(n)}; }

// ---------------------------------------------------------------------------
// Connection operations

inline VectorValuedForm torsion(const Connection& c) {
  std::size_t n = c.dimension();
  auto t = TensorField::generate(TensorShape{2, 1, n}, [&](std::span<const std::size_t> x) {
    return c.g(x[2], x[0], x[1]) - c.g(x[2], x[1], x[0]);
  });
  return {2, std::move(t)};
}

inline EndValuedForm curvature(const Connection& c) {
  std::size_t n = c.dimension();
  auto r = TensorField::generate(TensorShape{3, 1, n}, [&](std::span<const std::size_t> x) {
    std::size_t i = x[0], j = x[1], k = x[2], l = x[3];
    Polynomial v = c.g(l, j, k).derivative(i + 1) - c.g(l, i, k).derivative(j + 1);
    for (std::size_t m = 0; m < n; ++m) {
      if (const auto& a = c.g(m, j, k); !a.is_zero()) v += a * c.g(l, i, m);
      if (const auto& a = c.g(m, i, k); !a.is_zero()) v -= a * c.g(l, j, m);
    }
    return v;
  });
  return {2, std::move(r)};
}

namespace detail {

// D(d, slots...) = ∂_d T(slots...) - Σ_{s corrected cov} Γ^m_{d,i_s} T(..m..) + Σ_u Γ^{u}_{d,m} T(..m..).
// The direction d comes FIRST in the result.  Covariant slots with index below
// `first_corrected_cov` (0-based) receive no Γ correction: those are form slots
// when building d_∇.
inline TensorField directional_derivative(const Connection& c, const TensorField& t, std::size_t first_corrected_cov) {
  require_same_dimension(c.dimension(), t.dimension(), "covariant derivative");
  const auto& s = t.shape();
  std::size_t n = s.n;
  IndexCodec ct = t.codec();
  std::vector<std::size_t> src(s.rank());
  return TensorField::generate(TensorShape{s.p + 1, s.q, n}, [&](std::span<const std::size_t> x) {
    std::size_t d = x[0];
    std::copy(x.begin() + 1, x.end(), src.begin());
    Polynomial v = t[ct.encode(src)].derivative(d + 1);
    for (std::size_t slot = first_corrected_cov; slot < s.p; ++slot) {
      std::size_t orig = src[slot];
      for (std::size_t m = 0; m < n; ++m) {
        const auto& gam = c.g(m, d, orig);
        if (gam.is_zero()) continue;
        src[slot] = m;
        if (const auto& tv = t[ct.encode(src)]; !tv.is_zero()) v -= gam * tv;
      }
      src[slot] = orig;
    }
    for (std::size_t slot = s.p; slot < s.rank(); ++slot) {
      std::size_t orig = src[slot];
      for (std::size_t m = 0; m < n; ++m) {
        const auto& gam = c.g(orig, d, m);
        if (gam.is_zero()) continue;
        src[slot] = m;
        if (const auto& tv = t[ct.encode(src)]; !tv.is_zero()) v += gam * tv;
      }
      src[slot] = orig;
    }
    return v;
  });
}

// (dT)(i_0..i_k, rest) = Σ_a (-1)^a D(i_a, i_0..î_a..i_k, rest), where D has the
// direction first and k form slots after it.
inline TensorField alternate_direction(const TensorField& d, std::size_t k) {
  const auto& s = d.shape();
  IndexCodec cd = d.codec();
  std::vector<std::size_t> src(s.rank());
  return TensorField::generate(s, [&](std::span<const std::size_t> x) {
    Polynomial v(s.n);
    for (std::size_t a = 0; a <= k; ++a) {
      src[0] = x[a];
      std::size_t w = 1;
      for (std::size_t b = 0; b <= k; ++b)
        if (b != a) src[w++] = x[b];
      std::copy(x.begin() + k + 1, x.end(), src.begin() + k + 1);
      const auto& term = d[cd.encode(src)];
      if (a % 2 == 0)
        v += term;
      else
        v -= term;
    }
    return v;
  });
}

}  // namespace detail

// Shape (p+1, q); the new covariant slot is last and is the differentiation direction.
inline TensorField covariant_derivative(const Connection& c, const TensorField& t) {
  TensorField d = detail::directional_derivative(c, t, 0);
  // result(y_1..y_p, y_{p+1}) = d(y_{p+1}, y_1..y_p)
  std::vector<std::size_t> perm(d.shape().p);
  perm[0] = perm.size();
  for (std::size_t s = 1; s < perm.size(); ++s) perm[s] = s;
  return permute_covariant(d, perm);
}

inline VectorValuedForm exterior_covariant_derivative(const Connection& c, const VectorValuedForm& a) {
  std::size_t k = a.degree();
  TensorField d = detail::directional_derivative(c, a.field(), k);
  return {k + 1, detail::alternate_direction(d, k)};
}

inline EndValuedForm exterior_covariant_derivative(const Connection& c, const EndValuedForm& b) {
  std::size_t k = b.degree();
  TensorField d = detail::directional_derivative(c, b.field(), k);
  return {k + 1, detail::alternate_direction(d, k)};
}

inline VectorValuedForm ext_cov_deriv_vector(const Connection& c, const VectorValuedForm& a) {
  return exterior_covariant_derivative(c, a);
}
inline EndValuedForm ext_cov_deriv_endo(const Connection& c, const EndValuedForm& b) {
  return exterior_covariant_derivative(c, b);
}

// Ordinary exterior derivative of a scalar k-form ((k,0) field).
inline TensorField exterior_derivative(const TensorField& omega) {
  if (omega.shape().q != 0) throw ShapeMismatch("exterior_derivative expects a scalar form");
  std::size_t k = omega.shape().p;
  Connection flat(omega.dimension());
  TensorField d = detail::directional_derivative(flat, omega, k);
  TensorField r = detail::alternate_direction(d, k);
  return detail::declare_form_slots(r, k + 1);
}

// (β∧I)(X_0..X_k) = Σ_a (-1)^(k-a) β(X_0..X̂_a..X_k)(X_a).  For k = 2 this is the
// cyclic sum β^l_ij,k + β^l_jk,i + β^l_ki,j.
inline VectorValuedForm wedge_identity(const EndValuedForm& b) {
  std::size_t k = b.degree();
  const TensorField& f = b.field();
  IndexCodec cf = f.codec();
  std::vector<std::size_t> src(f.shape().rank());
  auto r = TensorField::generate(TensorShape{k + 1, 1, f.dimension()}, [&](std::span<const std::size_t> x) {
    Polynomial v(f.dimension());
    for (std::size_t a = 0; a <= k; ++a) {
      std::size_t w = 0;
      for (std::size_t c = 0; c <= k; ++c)
        if (c != a) src[w++] = x[c];
      src[k] = x[a];
      src[k + 1] = x[k + 1];
      const auto& term = f[cf.encode(src)];
      if ((k - a) % 2 == 0)
        v += term;
      else
        v -= term;
    }
    return v;
  });
  return {k + 1, std::move(r)};
}
inline VectorValuedForm wedge_endo_identity(const EndValuedForm& b) { return wedge_identity(b); }

// (θ∧I)^l_ij = θ_i δ^l_j - θ_j δ^l_i.
inline VectorValuedForm wedge_oneform_identity(const TensorField& theta) {
  if (theta.shape().p != 1 || theta.shape().q != 0) throw ShapeMismatch("wedge_oneform_identity expects a 1-form");
  std::size_t n = theta.dimension();
  auto r = TensorField::generate(TensorShape{2, 1, n}, [&](std::span<const std::size_t> x) {
    Polynomial v(n);
    if (x[2] == x[1]) v += theta[x[0]];
    if (x[2] == x[0]) v -= theta[x[1]];
    return v;
  });
  return {2, std::move(r)};
}

// (ω⊗I)^l_{i..j,a} = ω_{i..j} δ^l_a.
inline EndValuedForm tensor_identity(const TensorField& omega) {
  if (omega.shape().q != 0) throw ShapeMismatch("tensor_identity expects a scalar form");
  std::size_t k = omega.shape().p;
  if (!detail::fully_antisymmetric(omega, k)) throw FormError("tensor_identity expects an alternating form");
  return {k, insert_delta(omega, 1)};
}

// θ_j = Tor^m_mj.
inline TensorField torsion_trace(const VectorValuedForm& tor) { return contract(tor.field(), 1, 1); }

// ρ_ij = R^k_ijk.
inline TensorField curvature_trace(const EndValuedForm& r) {
  TensorField rho = contract(r.field(), 3, 1);
  return detail::declare_form_slots(rho, 2);
}

// ---------------------------------------------------------------------------
// Normal tensors

inline TensorField normal0(const Connection& c) {
  TensorField n0 = torsion(c).field() * Rational(1, 2);
  return n0;
}

// N^l_ijk = -1/6 ( -3 R^l_kij + R^l_jki - R^l_ijk - 2 (∇Tor)^l_ijk - 2 (∇Tor)^l_kji
//                  + Tor^m_kj Tor^l_mi + 1/2 Tor^m_ij Tor^l_km )
inline TensorField normal1(const Connection& c) {
  std::size_t n = c.dimension();
  const TensorField tor = torsion(c).field();
  const TensorField r = curvature(c).field();
  const TensorField dtor = covariant_derivative(c, tor);
  const Rational half(1, 2), minus_sixth(-1, 6);
  return TensorField::generate(TensorShape{3, 1, n}, [&](std::span<const std::size_t> x) {
    std::size_t i = x[0], j = x[1], k = x[2], l = x[3];
    Polynomial v = r.get({j, k, i, l}) - r.get({i, j, k, l}) - r.get({k, i, j, l}) * Rational(3);
    v -= (dtor.get({i, j, k, l}) + dtor.get({k, j, i, l})) * Rational(2);
    for (std::size_t m = 0; m < n; ++m) {
      if (const auto& a = tor.get({k, j, m}); !a.is_zero()) v += a * tor.get({m, i, l});
      if (const auto& a = tor.get({i, j, m}); !a.is_zero()) v += (a * tor.get({k, m, l})) * half;
    }
    return v * minus_sixth;
  });
}

// Σ over all permutations of the covariant slots.
inline TensorField full_covariant_symmetrization(const TensorField& t) {
  std::vector<std::size_t> perm(t.shape().p);
  std::iota(perm.begin(), perm.end(), std::size_t{1});
  TensorField sum(t.shape());
  do {
    sum += permute_covariant(t, perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return sum;
}

// ---------------------------------------------------------------------------
// Connection file:
//   {"dim": 4, "christoffel": [{"upper": 1, "lower": [1, 2], "poly": "x3"}, ...]}

class ConnectionFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Connection connection_from_json(const nlohmann::json& j) {
  try {
    auto n = j.at("dim").get<long long>();
    if (n < 2) throw ConnectionFormatError("unsupported dimension " + std::to_string(n) + " (need dim >= 2)");
    Connection c(static_cast<std::size_t>(n));
    std::set<std::tuple<std::size_t, std::size_t, std::size_t>> seen;
    std::size_t entry = 0;
    for (const auto& e : j.at("christoffel")) {
      ++entry;
      auto upper = e.at("upper").get<long long>();
      auto lower = e.at("lower").get<std::vector<long long>>();
      auto where = "christoffel entry " + std::to_string(entry);
      if (lower.size() != 2) throw ConnectionFormatError(where + ": 'lower' needs two indices");
      for (auto v : {upper, lower[0], lower[1]})
        if (v < 1 || v > n) throw ConnectionFormatError(where + ": index " + std::to_string(v) + " outside 1.." + std::to_string(n));
      auto key = std::make_tuple<std::size_t, std::size_t, std::size_t>(upper, lower[0], lower[1]);
      if (!seen.insert(key).second)
        throw ConnectionFormatError(where + ": duplicate entry for upper " + std::to_string(upper) + ", lower [" +
                                    std::to_string(lower[0]) + "," + std::to_string(lower[1]) + "]");
      Polynomial p;
      try {
        p = parse_polynomial(e.at("poly").get<std::string>(), static_cast<std::size_t>(n));
      } catch (const ParseError& pe) {
        throw ConnectionFormatError(where + ": " + pe.what());
      }
      c.set(upper, lower[0], lower[1], std::move(p));
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConnectionFormatError(std::string("malformed connection document: ") + e.what());
  }
}

inline Connection connection_from_string(const std::string& text) {
  try {
    return connection_from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConnectionFormatError(std::string("connection JSON: ") + e.what());
  }
}

inline nlohmann::json connection_to_json(const Connection& c) {
  std::size_t n = c.dimension();
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t l = 1; l <= n; ++l)
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t j = 1; j <= n; ++j)
        if (const auto& p = c.christoffel(l, i, j); !p.is_zero())
          entries.push_back({{"upper", l}, {"lower", {i, j}}, {"poly", to_string(p)}});
  return {{"dim", n}, {"christoffel", entries}};
}

}  // namespace nabla
