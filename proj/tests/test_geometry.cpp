#include "nabla/geometry.hpp"
#include "nabla/random_connection.hpp"

#include <gtest/gtest.h>

#include <array>

using namespace nabla;

// The oracles below are written from the coordinate formulas with plain nested
// loops over a dense Γ array, without going through the library's generic
// derivative or contraction machinery.

namespace {

constexpr std::size_t N = 4;

Polynomial P(const char* text) { return parse_polynomial(text, N); }
Polynomial zero() { return Polynomial(N); }

using Gamma = std::array<std::array<std::array<Polynomial, N>, N>, N>;  // [l][i][j]

Gamma dense(const Connection& c) {
  Gamma g;
  for (std::size_t l = 0; l < N; ++l)
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) g[l][i][j] = c.christoffel(l + 1, i + 1, j + 1);
  return g;
}

Polynomial oracle_tor(const Gamma& g, std::size_t l, std::size_t i, std::size_t j) { return g[l][i][j] - g[l][j][i]; }

Polynomial oracle_R(const Gamma& g, std::size_t l, std::size_t i, std::size_t j, std::size_t k) {
  Polynomial v = g[l][j][k].derivative(i + 1) - g[l][i][k].derivative(j + 1);
  for (std::size_t m = 0; m < N; ++m) v += g[m][j][k] * g[l][i][m] - g[m][i][k] * g[l][j][m];
  return v;
}

// (∇_k Tor)^l_ij = ∂_k Tor^l_ij - Γ^m_ki Tor^l_mj - Γ^m_kj Tor^l_im + Γ^l_km Tor^m_ij
Polynomial oracle_dtor(const Gamma& g, std::size_t l, std::size_t i, std::size_t j, std::size_t k) {
  Polynomial v = oracle_tor(g, l, i, j).derivative(k + 1);
  for (std::size_t m = 0; m < N; ++m) {
    v -= g[m][k][i] * oracle_tor(g, l, m, j);
    v -= g[m][k][j] * oracle_tor(g, l, i, m);
    v += g[l][k][m] * oracle_tor(g, m, i, j);
  }
  return v;
}

std::vector<Connection> seeded(std::uint64_t seed, std::size_t count) {
  RandomConnectionSpec spec;
  spec.seed = seed;
  return random_connections(spec, count);
}

TensorField scalar_two_form(const char* a, const char* b, const char* c) {
  // ω_12 = a, ω_13 = b, ω_24 = c, antisymmetric.
  TensorField w(TensorShape{2, 0, N});
  auto put = [&](std::size_t i, std::size_t j, const char* t) {
    w.get({i, j}) = P(t);
    w.get({j, i}) = -P(t);
  };
  put(0, 1, a);
  put(0, 2, b);
  put(1, 3, c);
  w.declare_antisymmetric(1, 2);
  return w;
}

}  // namespace

TEST(Torsion, TestConnectionValues) {
  auto tor = torsion(reference_connection()).field();
  EXPECT_EQ(tor.at({1, 2}, {1}), P("x3"));
  EXPECT_EQ(tor.at({4, 3}, {3}), P("x1*x4"));
  EXPECT_EQ(tor.at({3, 1}, {3}), P("x2*x4"));
  std::size_t nonzero = 0;
  for (std::size_t c = 0; c < tor.shape().component_count(); ++c) nonzero += !tor[c].is_zero();
  EXPECT_EQ(nonzero, 6u);
}

TEST(Torsion, FlatAndSymmetricVanish) {
  EXPECT_TRUE(torsion(flat_connection(N)).field().is_zero());
  for (const auto& c : seeded(11, 5)) EXPECT_TRUE(torsion(symmetrized(c)).field().is_zero());
}

TEST(Curvature, MatchesDirectFormula) {
  auto conns = seeded(3, 5);
  conns.push_back(reference_connection());
  for (const auto& c : conns) {
    auto g = dense(c);
    auto r = curvature(c).field();
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j)
        for (std::size_t k = 0; k < N; ++k)
          for (std::size_t l = 0; l < N; ++l) ASSERT_EQ(r.get({i, j, k, l}), oracle_R(g, l, i, j, k));
  }
  EXPECT_TRUE(curvature(flat_connection(N)).field().is_zero());
}

TEST(Curvature, ConstantGammaWithoutCrossTerms) {
  // Only Γ^1_23 is nonzero, so every Γ·Γ term vanishes.
  Connection c(N);
  c.set(1, 2, 3, P("x1"));
  auto r = curvature(c).field();
  EXPECT_EQ(r.at({1, 2, 3}, {1}), P("1"));
  EXPECT_EQ(r.at({2, 1, 3}, {1}), P("-1"));
}

TEST(CovariantDerivative, TorsionMatchesFourTermFormula) {
  for (const auto& c : {reference_connection(), seeded(5, 1).front()}) {
    auto g = dense(c);
    auto d = covariant_derivative(c, torsion(c).field());
    ASSERT_EQ(d.shape().p, 3u);
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j)
        for (std::size_t k = 0; k < N; ++k)
          for (std::size_t l = 0; l < N; ++l) ASSERT_EQ(d.get({i, j, k, l}), oracle_dtor(g, l, i, j, k));
  }
}

TEST(CovariantDerivative, ScalarsAndFlatConnection) {
  auto c = reference_connection();
  EXPECT_TRUE(covariant_derivative(c, TensorField::scalar(P("7"))).is_zero());
  auto f = TensorField::scalar(P("x1*x2^2"));
  auto grad = covariant_derivative(c, f);
  EXPECT_EQ(grad[1], P("2*x1*x2"));
  TensorField v(TensorShape{0, 1, N});
  v[0] = P("x2*x3");
  auto dv = covariant_derivative(flat_connection(N), v);
  EXPECT_EQ(dv.get({2, 0}), P("x2"));
}

TEST(ExteriorCovariant, IdentityFormGivesTorsion) {
  for (const auto& c : seeded(9, 5))
    EXPECT_TRUE(equal(ext_cov_deriv_vector(c, identity_form(N)).field(), torsion(c).field()));
  auto zero_form = VectorValuedForm(2, TensorField(TensorShape{2, 1, N}).declare_antisymmetric(1, 2));
  EXPECT_TRUE(ext_cov_deriv_vector(reference_connection(), zero_form).field().is_zero());
}

TEST(ExteriorCovariant, BianchiOnTestConnection) {
  auto c = reference_connection();
  EXPECT_TRUE(equal(ext_cov_deriv_vector(c, torsion(c)).field(), wedge_identity(curvature(c)).field()));
  EXPECT_TRUE(ext_cov_deriv_endo(c, curvature(c)).field().is_zero());
}

TEST(ExteriorCovariant, ScalarTimesIdentity) {
  auto w = scalar_two_form("x1*x3", "x2^2", "x4");
  auto dw = exterior_derivative(w);
  for (const auto& c : seeded(2, 3))
    EXPECT_TRUE(equal(ext_cov_deriv_endo(c, tensor_identity(w)).field(), tensor_identity(dw).field()));
}

TEST(ExteriorCovariant, RejectsNonForms) {
  TensorField t(TensorShape{2, 1, N});
  t.get({0, 1, 0}) = P("x1");
  EXPECT_THROW(VectorValuedForm(2, t), FormError);
}

TEST(WedgeIdentity, ScalarTwoFormComponents) {
  auto w = scalar_two_form("x1*x3", "x2^2", "x4");
  auto wi = wedge_identity(tensor_identity(w)).field();
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      for (std::size_t k = 0; k < N; ++k)
        for (std::size_t l = 0; l < N; ++l) {
          Polynomial expect = zero();
          if (l == k) expect += w.get({i, j});
          if (l == i) expect += w.get({j, k});
          if (l == j) expect += w.get({k, i});
          ASSERT_EQ(wi.get({i, j, k, l}), expect);
        }
  EXPECT_TRUE(wedge_identity(curvature(flat_connection(N))).field().is_zero());
}

TEST(WedgeIdentity, OneFormTrace) {
  TensorField theta(TensorShape{1, 0, N});
  theta[0] = P("x2");
  theta[3] = P("x1*x4 - 2");
  auto h = wedge_oneform_identity(theta).field();
  auto tr = contract(h, 2, 1);
  for (std::size_t i = 0; i < N; ++i) EXPECT_EQ(tr[i], theta[i] * Rational(long(N - 1)));
  EXPECT_TRUE(wedge_oneform_identity(TensorField(TensorShape{1, 0, N})).field().is_zero());
}

TEST(TensorIdentity, TraceGivesNOmega) {
  auto w = scalar_two_form("x1", "x2*x3", "1");
  auto tr = contract(tensor_identity(w).field(), 3, 1);
  EXPECT_TRUE(equal(tr, w * Rational(long(N))));
}

TEST(ExteriorDerivative, Examples) {
  TensorField theta(TensorShape{1, 0, N});
  theta[0] = P("x2");
  auto d = exterior_derivative(theta);
  EXPECT_EQ(d.get({1, 0}), P("1"));
  EXPECT_EQ(d.get({0, 1}), P("-1"));
  EXPECT_TRUE(d.is_antisymmetric(1, 2));

  auto f = P("x1^2*x3 + x2*x4");
  TensorField grad(TensorShape{1, 0, N});
  for (std::size_t k = 0; k < N; ++k) grad[k] = f.derivative(k + 1);
  EXPECT_TRUE(exterior_derivative(grad).is_zero());
}

TEST(Traces, TestConnection) {
  auto c = reference_connection();
  auto theta = torsion_trace(torsion(c));
  auto g = dense(c);
  for (std::size_t j = 0; j < N; ++j) {
    Polynomial expect = zero();
    for (std::size_t m = 0; m < N; ++m) expect += oracle_tor(g, m, m, j);
    EXPECT_EQ(theta[j], expect);
  }
  auto rho = curvature_trace(curvature(c));
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      Polynomial expect = zero();
      for (std::size_t k = 0; k < N; ++k) expect += oracle_R(g, k, i, j, k);
      EXPECT_EQ(rho.get({i, j}), expect);
    }
  // H = θ∧I, θ from the two-step oracle.
  auto h = wedge_oneform_identity(theta).field();
  EXPECT_EQ(h.at({1, 2}, {2}), theta[0]);
}

TEST(Normal, ZeroOrder) {
  auto n0 = normal0(reference_connection());
  EXPECT_EQ(n0.at({1, 2}, {1}), P("1/2*x3"));
  EXPECT_TRUE(normal0(flat_connection(N)).is_zero());
  EXPECT_TRUE(normal0(symmetrized(seeded(4, 1).front())).is_zero());
}

TEST(Normal, FirstOrderSymmetricFormula) {
  EXPECT_TRUE(normal1(flat_connection(N)).is_zero());
  for (const auto& raw : seeded(6, 3)) {
    auto c = symmetrized(raw);
    auto g = dense(c);
    auto n1 = normal1(c);
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j)
        for (std::size_t k = 0; k < N; ++k)
          for (std::size_t l = 0; l < N; ++l) {
            Polynomial expect =
                (oracle_R(g, l, k, i, j) * Rational(-3) + oracle_R(g, l, j, k, i) - oracle_R(g, l, i, j, k)) *
                Rational(-1, 6);
            ASSERT_EQ(n1.get({i, j, k, l}), expect);
          }
  }
}

TEST(Normal, FullSymmetrizationVanishes) {
  for (const auto& c : seeded(1, 5)) EXPECT_TRUE(full_covariant_symmetrization(normal1(c)).is_zero());
}

TEST(ConnectionIO, RoundTrip) {
  auto c = reference_connection();
  EXPECT_TRUE(connection_from_json(connection_to_json(c)) == c);
}

TEST(ConnectionIO, Errors) {
  EXPECT_THROW(connection_from_string("{"), ConnectionFormatError);
  EXPECT_THROW(connection_from_string(R"({"dim": 1, "christoffel": []})"), ConnectionFormatError);
  EXPECT_THROW(
      connection_from_string(
          R"({"dim": 4, "christoffel": [{"upper": 1, "lower": [1, 2], "poly": "x3"}, {"upper": 1, "lower": [1, 2], "poly": "x1"}]})"),
      ConnectionFormatError);
  EXPECT_THROW(connection_from_string(R"({"dim": 4, "christoffel": [{"upper": 5, "lower": [1, 2], "poly": "x3"}]})"),
               ConnectionFormatError);
  try {
    connection_from_string(R"({"dim": 4, "christoffel": [{"upper": 1, "lower": [1, 2], "poly": "x3 + * x1"}]})");
    FAIL();
  } catch (const ConnectionFormatError& e) {
    EXPECT_NE(std::string(e.what()).find("column 6"), std::string::npos) << e.what();
  }
}
