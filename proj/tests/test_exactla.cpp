#include "nabla/exactla.hpp"
#include "nabla/geometry.hpp"
#include "nabla/random_connection.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace nabla;

namespace {

RationalMatrix M(std::initializer_list<std::initializer_list<long>> rows) {
  std::vector<RationalVector> rs;
  for (auto r : rows) {
    RationalVector v;
    for (long x : r) v.emplace_back(x);
    rs.push_back(v);
  }
  return RationalMatrix::from_rows(rs);
}

RationalMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int zero_bias) {
  std::uniform_int_distribution<int> val(-4, 4), z(0, 9), den(1, 3);
  RationalMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (z(rng) >= zero_bias) m(i, j) = make_rational(val(rng), den(rng));
  return m;
}

}  // namespace

TEST(Rank, Examples) {
  EXPECT_EQ(rank(RationalMatrix::identity(5)), 5u);
  EXPECT_EQ(rank(RationalMatrix(4, 3)), 0u);
  // Rows 1 and 3 equal; row 2 independent: hand elimination leaves two pivots.
  EXPECT_EQ(rank(M({{1, 2, 3}, {0, 1, 4}, {1, 2, 3}})), 2u);
  EXPECT_EQ(rank(M({{2, 4, 6}, {1, 2, 3}, {3, 6, 9}})), 1u);
}

TEST(Rank, ReducedEchelonByHand) {
  auto e = reduced_echelon(M({{2, 4, 6}, {1, 3, 5}, {0, 0, 0}}));
  ASSERT_EQ(e.pivots, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(e.reduced(0, 0), 1);
  EXPECT_EQ(e.reduced(0, 1), 0);
  EXPECT_EQ(e.reduced(0, 2), -1);
  EXPECT_EQ(e.reduced(1, 2), 2);
}

TEST(Kernel, Examples) {
  EXPECT_TRUE(kernel_basis(RationalMatrix::identity(4)).empty());
  EXPECT_EQ(kernel_basis(RationalMatrix(2, 3)).size(), 3u);
  auto m = M({{1, 2, 3}, {2, 4, 6}});
  auto k = kernel_basis(m);
  ASSERT_EQ(k.size(), 2u);
  for (const auto& v : k) EXPECT_TRUE(is_zero_vector(m * v));
}

TEST(Kernel, RankNullityAndRescaling) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t r = 1 + trial % 7, c = 1 + (trial * 5) % 9;
    auto m = random_matrix(rng, r, c, trial % 8);
    auto k = kernel_basis(m);
    EXPECT_EQ(rank(m) + k.size(), c);
    for (const auto& v : k) EXPECT_TRUE(is_zero_vector(m * v));
    auto scaled = m;
    for (std::size_t j = 0; j < c; ++j)
      for (std::size_t i = 0; i < r; ++i) scaled(i, j) *= make_rational(long(j + 2), 3);
    EXPECT_EQ(rank(scaled), rank(m));
    EXPECT_EQ(rank(m.transpose()), rank(m));
  }
}

TEST(InSpan, Examples) {
  std::vector<RationalVector> basis{{1, 0, 1}, {0, 1, 1}};
  auto z = in_span({0, 0, 0}, basis);
  ASSERT_TRUE(z);
  EXPECT_TRUE(is_zero_vector(*z));
  auto u = in_span(basis[0], basis);
  ASSERT_TRUE(u);
  EXPECT_EQ(*u, (RationalVector{1, 0}));
  auto w = in_span({Rational(1, 2), 3, Rational(7, 2)}, basis);
  ASSERT_TRUE(w);
  EXPECT_EQ(*w, (RationalVector{Rational(1, 2), 3}));
  EXPECT_FALSE(in_span({0, 0, 1}, basis));
  EXPECT_FALSE(in_span({1, 0, 0}, {}));
  EXPECT_TRUE(in_span({0, 0, 0}, {}));
}

TEST(CompareSpans, EqualAndProper) {
  std::vector<RationalVector> a{{1, 1, 0}, {0, 1, 1}}, b{{1, 2, 1}, {1, 0, -1}}, c{{1, 0, 0}};
  EXPECT_TRUE(compare_spans(a, b).equal);
  auto ac = compare_spans(a, c);
  EXPECT_FALSE(ac.equal);
  EXPECT_EQ(ac.rank_a, 2u);
  EXPECT_EQ(ac.rank_b, 1u);
  ASSERT_EQ(ac.b_in_a.size(), 1u);
  EXPECT_FALSE(ac.b_in_a[0].has_value());
}

TEST(Flatten, Examples) {
  auto tor = torsion(reference_connection()).field();
  TensorField zero(tor.shape());
  auto f = flatten({tor, zero, tor * Rational(2)});
  EXPECT_TRUE(is_zero_vector(f.column(1)));
  auto c0 = f.column(0), c2 = f.column(2);
  for (std::size_t i = 0; i < c0.size(); ++i) EXPECT_EQ(c2[i], c0[i] * 2);
  EXPECT_EQ(rank(f.matrix), 1u);
  EXPECT_THROW(flatten({tor, curvature(reference_connection()).field()}), ShapeMismatch);
}

TEST(Flatten, RoundTrip) {
  RandomConnectionSpec spec;
  std::vector<TensorField> fields;
  for (const auto& c : random_connections(spec, 4)) fields.push_back(curvature(c).field());
  auto f = flatten(fields);
  for (std::size_t j = 0; j < fields.size(); ++j) EXPECT_TRUE(equal(unflatten(f, j), fields[j]));
}

TEST(RandomConnections, Deterministic) {
  RandomConnectionSpec spec;
  spec.seed = 99;
  auto a = random_connections(spec, 5), b = random_connections(spec, 5);
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_TRUE(a[k] == b[k]);
  spec.seed = 100;
  EXPECT_FALSE(random_connections(spec, 1).front() == a.front());
  for (const auto& c : a) {
    std::size_t nonzero = 0;
    for (std::size_t l = 1; l <= 4; ++l)
      for (std::size_t i = 1; i <= 4; ++i)
        for (std::size_t j = 1; j <= 4; ++j) {
          const auto& p = c.christoffel(l, i, j);
          nonzero += !p.is_zero();
          EXPECT_LE(p.degree(), 2u);
        }
    EXPECT_LE(nonzero, spec.density);
  }
}
