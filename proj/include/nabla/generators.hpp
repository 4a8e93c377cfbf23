#pragma once

// The 19 natural End-valued 2-forms built from the normal tensors N0 (2,1) and
// N1 (3,1), and the contraction/δ-insertion/permutation schemes that span
// GL-equivariant maps between tensor spaces.

#include "nabla/geometry.hpp"
#include "nabla/tensor.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <string>
#include <vector>

namespace nabla {

// Covariant index patterns for (3,1) fields: pattern "jki" means
// result_ijk = source_jki.
struct IndexPattern {
  const char* name;
  std::array<std::size_t, 3> perm;
};

inline constexpr IndexPattern kIJK{"ijk", {1, 2, 3}};
inline constexpr IndexPattern kJIK{"jik", {2, 1, 3}};
inline constexpr IndexPattern kJKI{"jki", {2, 3, 1}};
inline constexpr IndexPattern kIKJ{"ikj", {1, 3, 2}};
inline constexpr IndexPattern kKIJ{"kij", {3, 1, 2}};
inline constexpr IndexPattern kKJI{"kji", {3, 2, 1}};

inline TensorField apply_pattern(const TensorField& t, const IndexPattern& pat) {
  return permute_covariant(t, std::span<const std::size_t>(pat.perm));
}

namespace detail {

inline void require_shape(const TensorField& t, std::size_t p, std::size_t q, const char* what) {
  if (t.shape().p != p || t.shape().q != q)
    throw ShapeMismatch(std::string(what) + ": expected a (" + std::to_string(p) + "," + std::to_string(q) +
                        ") field, got " + to_string(t.shape()));
}


}  // namespace detail

// C0 = N_ijk^l, C1 = N_mij^m δ_k^l, C2 = N_imj^m δ_k^l, C3 = N_ijm^m δ_k^l.
inline std::vector<TensorField> build_C_family(const TensorField& n1) {
  detail::require_shape(n1, 3, 1, "build_C_family");
  std::size_t n = n1.dimension();
  TensorShape s{3, 1, n};
  auto trace = [&](auto index_of) {
    return TensorField::generate(s, [&](std::span<const std::size_t> x) {
      Polynomial v(n);
      if (x[2] != x[3]) return v;
      for (std::size_t m = 0; m < n; ++m) v += n1.get(index_of(x[0], x[1], m));
      return v;
    });
  };
  using Idx = std::array<std::size_t, 4>;
  std::vector<TensorField> out;
  out.push_back(n1);
  out.back().clear_antisymmetry();
  out.push_back(trace([](std::size_t i, std::size_t j, std::size_t m) { return Idx{m, i, j, m}; }));
  out.push_back(trace([](std::size_t i, std::size_t j, std::size_t m) { return Idx{i, m, j, m}; }));
  out.push_back(trace([](std::size_t i, std::size_t j, std::size_t m) { return Idx{i, j, m, m}; }));
  return out;
}

// D1 = N_ij^m N_mk^l          D2 = N_ij^l N_mk^m          D3 = N_si^m N_mk^s δ_j^l
// D4 = N_ij^m N_ms^s δ_k^l    D5 = N_mi^m N_sj^s δ_k^l
inline std::vector<TensorField> build_D_family(const TensorField& n0) {
  detail::require_shape(n0, 2, 1, "build_D_family");
  if (!n0.is_antisymmetric(1, 2)) throw std::invalid_argument("build_D_family: N0 must be antisymmetric in (i,j)");
  std::size_t n = n0.dimension();
  TensorShape s{3, 1, n};
  auto N = [&](std::size_t a, std::size_t b, std::size_t up) -> const Polynomial& { return n0.get({a, b, up}); };

  // θ_i = N_mi^m
  std::vector<Polynomial> theta(n, Polynomial(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t m = 0; m < n; ++m) theta[i] += N(m, i, m);

  std::vector<TensorField> out;
  out.push_back(TensorField::generate(s, [&](std::span<const std::size_t> x) {
    Polynomial v(n);
    for (std::size_t m = 0; m < n; ++m)
      if (const auto& a = N(x[0], x[1], m); !a.is_zero()) v += a * N(m, x[2], x[3]);
    return v;
  }));
  out.push_back(TensorField::generate(s, [&](std::span<const std::size_t> x) {
    Polynomial v(n);
    for (std::size_t m = 0; m < n; ++m) v += N(m, x[2], m);
    return N(x[0], x[1], x[3]) * v;
  }));
  out.push_back(TensorField::generate(s, [&](std::span<const std::size_t> x) {
    Polynomial v(n);
    if (x[1] != x[3]) return v;
    for (std::size_t si = 0; si < n; ++si)
      for (std::size_t m = 0; m < n; ++m)
        if (const auto& a = N(si, x[0], m); !a.is_zero()) v += a * N(m, x[2], si);
    return v;
  }));
  out.push_back(TensorField::generate(s, [&](std::span<const std::size_t> x) {
    Polynomial v(n);
    if (x[2] != x[3]) return v;
    for (std::size_t m = 0; m < n; ++m) {
      Polynomial tr(n);
      for (std::size_t si = 0; si < n; ++si) tr += N(m, si, si);
      v += N(x[0], x[1], m) * tr;
    }
    return v;
  }));
  out.push_back(TensorField::generate(s, [&](std::span<const std::size_t> x) {
    return x[2] == x[3] ? theta[x[0]] * theta[x[1]] : Polynomial(n);
  }));
  return out;
}

// D3 = X_ik δ_j^l with X_ik = tr(N_i N_k) symmetric, so the printed
// D3(jki) - D3(ikj) = (X_ji - X_ij) δ_k^l vanishes for every connection.
//   ijk     : D3(ijk) - D3(jik)
//   literal : D3(jki) - D3(ikj), identically zero
enum class T16Variant { ijk, literal };

// D5 = θ_i θ_j δ_k^l is symmetric in (i,j), so 2 D5 is not a 2-form.
//   skew    : D5(jki) - D5(ikj), antisymmetric in (i,j)
//   literal : 2 D5
enum class T19Variant { skew, literal };

struct GeneratorVariants {
  T16Variant t16 = T16Variant::ijk;
  T19Variant t19 = T19Variant::skew;
};

inline const char* to_string(T16Variant v) { return v == T16Variant::ijk ? "ijk" : "literal"; }
inline const char* to_string(T19Variant v) { return v == T19Variant::skew ? "skew" : "literal"; }

struct Generator {
  std::string label;       // "T1".."T19"
  std::string source;      // "C0".."C3", "D1".."D5"
  std::string expression;  // e.g. "C0(ijk) - C0(jik)", "2*D1"
  TensorField field;
};

struct GeneratorFamily {
  std::vector<Generator> entries;
  GeneratorVariants variants;

  std::size_t size() const { return entries.size(); }
  const TensorField& operator[](std::size_t label_number) const { return entries.at(label_number - 1).field; }

  std::vector<TensorField> fields() const {
    std::vector<TensorField> out;
    for (const auto& g : entries) out.push_back(g.field);
    return out;
  }

  bool all_antisymmetric() const {
    return std::all_of(entries.begin(), entries.end(), [](const Generator& g) { return g.field.is_antisymmetric(1, 2); });
  }
};

namespace detail {

inline Generator pattern_difference(const std::string& label, const std::string& src, const TensorField& f,
                                    const IndexPattern& plus, const IndexPattern& minus) {
  return {label, src, src + "(" + plus.name + ") - " + src + "(" + minus.name + ")",
          apply_pattern(f, plus) - apply_pattern(f, minus)};
}

inline Generator doubled(const std::string& label, const std::string& src, const TensorField& f) {
  TensorField t = f * Rational(2);
  t.clear_antisymmetry();
  return {label, src, "2*" + src, std::move(t)};
}

}  // namespace detail

// T_{3α+1} = Cα(ijk) - Cα(jik), T_{3α+2} = Cα(jki) - Cα(ikj), T_{3α+3} = Cα(kij) - Cα(kji)
// for α = 0..3 with the last one (C3, kij pattern) dropped; then
// T12 = 2D1, T13 = D1(jki) - D1(ikj), T14 = 2D2, T15 = D2(jki) - D2(ikj),
// T16 per variant, T17 = 2D4, T18 = D4(jki) - D4(ikj), T19 per variant.
inline GeneratorFamily build_T_list(const TensorField& n0, const TensorField& n1, GeneratorVariants variants = {}) {
  require_same_dimension(n0.dimension(), n1.dimension(), "build_T_list");
  auto C = build_C_family(n1);
  auto D = build_D_family(n0);
  GeneratorFamily fam;
  fam.variants = variants;
  std::size_t label = 1;
  auto next = [&]() { return "T" + std::to_string(label++); };
  for (std::size_t a = 0; a < 4; ++a) {
    std::string src = "C" + std::to_string(a);
    fam.entries.push_back(detail::pattern_difference(next(), src, C[a], kIJK, kJIK));
    fam.entries.push_back(detail::pattern_difference(next(), src, C[a], kJKI, kIKJ));
    if (a < 3) fam.entries.push_back(detail::pattern_difference(next(), src, C[a], kKIJ, kKJI));
  }
  fam.entries.push_back(detail::doubled(next(), "D1", D[0]));
  fam.entries.push_back(detail::pattern_difference(next(), "D1", D[0], kJKI, kIKJ));
  fam.entries.push_back(detail::doubled(next(), "D2", D[1]));
  fam.entries.push_back(detail::pattern_difference(next(), "D2", D[1], kJKI, kIKJ));
  if (variants.t16 == T16Variant::ijk)
    fam.entries.push_back(detail::pattern_difference(next(), "D3", D[2], kIJK, kJIK));
  else
    fam.entries.push_back(detail::pattern_difference(next(), "D3", D[2], kJKI, kIKJ));
  fam.entries.push_back(detail::doubled(next(), "D4", D[3]));
  fam.entries.push_back(detail::pattern_difference(next(), "D4", D[3], kJKI, kIKJ));
  if (variants.t19 == T19Variant::skew)
    fam.entries.push_back(detail::pattern_difference(next(), "D5", D[4], kJKI, kIKJ));
  else
    fam.entries.push_back(detail::doubled(next(), "D5", D[4]));

  for (auto& g : fam.entries)
    if (g.field.is_antisymmetric(1, 2)) g.field.declare_antisymmetric(1, 2);
  return fam;
}

// The C3 kij-pattern generator removed from the list above.
inline TensorField dropped_T12(const TensorField& n1) {
  auto C = build_C_family(n1);
  return apply_pattern(C[3], kKIJ) - apply_pattern(C[3], kKJI);
}

inline GeneratorFamily build_T_list(const Connection& c, GeneratorVariants variants = {}) {
  return build_T_list(normal0(c), normal1(c), variants);
}

// ---------------------------------------------------------------------------
// Contraction schemes
//
// A GL-equivariant map T^{p,q} -> T^{p̄,q̄} is a linear combination of schemes.
// Each scheme pairs every "lower" slot (source covariant, target contravariant)
// with an "upper" slot (source contravariant, target covariant):
//   source cov   <-> source contra : contraction
//   source cov   <-> target cov    : covariant slot assignment
//   target contra <-> source contra : contravariant slot assignment
//   target contra <-> target cov    : δ insertion
// so there are r! schemes with r = p + q̄ = q + p̄, and none when p - p̄ != q - q̄.

struct ContractionScheme {
  TensorShape source;
  TensorShape target;
  std::vector<SlotPair> contracted_pairs;    // (source cov, source contra)
  std::vector<SlotPair> cov_assignment;      // (source cov, target cov)
  std::vector<SlotPair> contra_assignment;   // (source contra, target contra)
  std::vector<SlotPair> delta_fills;         // (target cov, target contra)

  bool valid() const {
    std::vector<int> sc(source.p), su(source.q), tc(target.p), tu(target.q);
    auto mark = [](std::vector<int>& v, std::size_t s) {
      if (s < 1 || s > v.size()) return false;
      return ++v[s - 1] == 1;
    };
    for (auto [a, b] : contracted_pairs)
      if (!mark(sc, a) || !mark(su, b)) return false;
    for (auto [a, b] : cov_assignment)
      if (!mark(sc, a) || !mark(tc, b)) return false;
    for (auto [a, b] : contra_assignment)
      if (!mark(su, a) || !mark(tu, b)) return false;
    for (auto [a, b] : delta_fills)
      if (!mark(tc, a) || !mark(tu, b)) return false;
    auto all_one = [](const std::vector<int>& v) { return std::all_of(v.begin(), v.end(), [](int x) { return x == 1; }); };
    return all_one(sc) && all_one(su) && all_one(tc) && all_one(tu);
  }
};

inline std::vector<ContractionScheme> enumerate_schemes(const TensorShape& source, const TensorShape& target) {
  std::vector<ContractionScheme> out;
  if (source.n != target.n) return out;
  if (static_cast<long>(source.p) - static_cast<long>(target.p) !=
      static_cast<long>(source.q) - static_cast<long>(target.q))
    return out;
  std::size_t r = source.p + target.q;
  std::vector<std::size_t> sigma(r);
  std::iota(sigma.begin(), sigma.end(), std::size_t{0});
  // lower a < source.p : source cov a+1;   otherwise target contra a-source.p+1
  // upper b < source.q : source contra b+1; otherwise target cov b-source.q+1
  do {
    ContractionScheme s{source, target, {}, {}, {}, {}};
    for (std::size_t a = 0; a < r; ++a) {
      std::size_t b = sigma[a];
      bool lower_src = a < source.p, upper_src = b < source.q;
      std::size_t la = lower_src ? a + 1 : a - source.p + 1;
      std::size_t ub = upper_src ? b + 1 : b - source.q + 1;
      if (lower_src && upper_src)
        s.contracted_pairs.push_back({la, ub});
      else if (lower_src)
        s.cov_assignment.push_back({la, ub});
      else if (upper_src)
        s.contra_assignment.push_back({ub, la});
      else
        s.delta_fills.push_back({ub, la});
    }
    out.push_back(std::move(s));
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return out;
}

inline TensorField apply_scheme(const ContractionScheme& s, const TensorField& input) {
  require_same_shape(s.source, input.shape(), "apply_scheme");
  std::size_t n = s.source.n;
  std::size_t sp = s.source.p;
  IndexCodec ci = input.codec();
  std::vector<std::size_t> src(s.source.rank());
  std::size_t contractions = s.contracted_pairs.size();
  std::size_t sum_range = 1;
  for (std::size_t i = 0; i < contractions; ++i) sum_range *= n;
  std::vector<std::size_t> m(contractions);
  return TensorField::generate(s.target, [&](std::span<const std::size_t> x) {
    Polynomial v(n);
    for (auto [tc, tu] : s.delta_fills)
      if (x[tc - 1] != x[s.target.p + tu - 1]) return v;
    for (auto [sc, tc] : s.cov_assignment) src[sc - 1] = x[tc - 1];
    for (auto [su, tu] : s.contra_assignment) src[sp + su - 1] = x[s.target.p + tu - 1];
    for (std::size_t flat = 0; flat < sum_range; ++flat) {
      std::size_t f = flat;
      for (std::size_t c = 0; c < contractions; ++c) {
        auto [sc, su] = s.contracted_pairs[c];
        src[sc - 1] = src[sp + su - 1] = f % n;
        f /= n;
      }
      v += input[ci.encode(src)];
    }
    return v;
  });
}

}  // namespace nabla
