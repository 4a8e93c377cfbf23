#pragma once

// Dense (p,q)-tensor fields with polynomial components.
//
// Storage is a flat row-major array over the multi-index
// (cov_1, ..., cov_p, contra_1, ..., contra_q), covariant slots first, each
// index running over 0..n-1 internally.  The public API numbers slots from 1,
// and index values passed to at() are 1-based as well.

#include "nabla/poly.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nabla {

struct TensorShape {
  std::size_t p = 0;  // covariant
  std::size_t q = 0;  // contravariant
  std::size_t n = 0;  // dimension

  std::size_t rank() const { return p + q; }
  std::size_t component_count() const {
    std::size_t c = 1;
    for (std::size_t i = 0; i < rank(); ++i) c *= n;
    return c;
  }
  friend bool operator==(const TensorShape&, const TensorShape&) = default;
};

inline std::string to_string(const TensorShape& s) {
  return "(" + std::to_string(s.p) + "," + std::to_string(s.q) + ") in dimension " +
         std::to_string(s.n);
}

class ShapeMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline void require_same_shape(const TensorShape& a, const TensorShape& b, const char* what) {
  if (!(a == b))
    throw ShapeMismatch(std::string(what) + ": shape " + to_string(a) + " vs " + to_string(b));
}

// 0-based multi-index <-> flat offset.
class IndexCodec {
 public:
  IndexCodec(std::size_t n, std::size_t rank) : n_(n), rank_(rank) {}

  std::size_t encode(std::span<const std::size_t> idx) const {
    std::size_t flat = 0;
    for (std::size_t d : idx) flat = flat * n_ + d;
    return flat;
  }

  void decode(std::size_t flat, std::span<std::size_t> out) const {
    for (std::size_t i = rank_; i-- > 0;) {
      out[i] = flat % n_;
      flat /= n_;
    }
  }

  std::vector<std::size_t> decode(std::size_t flat) const {
    std::vector<std::size_t> out(rank_);
    decode(flat, out);
    return out;
  }

 private:
  std::size_t n_;
  std::size_t rank_;
};

using SlotPair = std::pair<std::size_t, std::size_t>;

class TensorField {
 public:
  TensorField() = default;

  explicit TensorField(TensorShape shape)
      : shape_(shape), components_(shape.component_count(), Polynomial(shape.n)) {}

  TensorField(TensorShape shape, std::vector<Polynomial> components)
      : shape_(shape), components_(std::move(components)) {
    if (components_.size() != shape_.component_count())
      throw ShapeMismatch("component array has " + std::to_string(components_.size()) +
                          " entries, expected " + std::to_string(shape_.component_count()));
    for (const auto& c : components_) require_same_dimension(shape_.n, c.dimension(), "tensor field");
  }

  static TensorField scalar(const Polynomial& value) {
    TensorField t(TensorShape{0, 0, value.dimension()});
    t.components_[0] = value;
    return t;
  }

  // Kronecker delta as a (1,1) field.
  static TensorField delta(std::size_t n) {
    TensorField t(TensorShape{1, 1, n});
    for (std::size_t i = 0; i < n; ++i) t.components_[i * n + i] = Polynomial::constant(n, 1);
    return t;
  }

  const TensorShape& shape() const { return shape_; }
  std::size_t dimension() const { return shape_.n; }
  IndexCodec codec() const { return IndexCodec(shape_.n, shape_.rank()); }

  std::span<const Polynomial> components() const { return components_; }
  std::span<Polynomial> components() { return components_; }

  const Polynomial& operator[](std::size_t flat) const { return components_[flat]; }
  Polynomial& operator[](std::size_t flat) { return components_[flat]; }

  // 0-based index access over the combined (cov..., contra...) multi-index.
  const Polynomial& get(std::span<const std::size_t> idx) const { return components_[codec().encode(idx)]; }
  Polynomial& get(std::span<const std::size_t> idx) { return components_[codec().encode(idx)]; }
  const Polynomial& get(std::initializer_list<std::size_t> idx) const {
    return get(std::span<const std::size_t>(idx.begin(), idx.size()));
  }
  Polynomial& get(std::initializer_list<std::size_t> idx) {
    return get(std::span<const std::size_t>(idx.begin(), idx.size()));
  }

  // 1-based access with separate covariant and contravariant indices.
  const Polynomial& at(std::initializer_list<std::size_t> cov, std::initializer_list<std::size_t> contra) const {
    return components_[offset(cov, contra)];
  }
  Polynomial& at(std::initializer_list<std::size_t> cov, std::initializer_list<std::size_t> contra) {
    return components_[offset(cov, contra)];
  }

  const std::vector<SlotPair>& antisym_pairs() const { return antisym_pairs_; }
  TensorField& declare_antisymmetric(std::size_t s1, std::size_t s2) {
    check_cov_slot(s1);
    check_cov_slot(s2);
    if (s1 == s2) throw std::invalid_argument("antisymmetric pair needs two distinct slots");
    SlotPair pr{std::min(s1, s2), std::max(s1, s2)};
    if (std::find(antisym_pairs_.begin(), antisym_pairs_.end(), pr) == antisym_pairs_.end())
      antisym_pairs_.push_back(pr);
    return *this;
  }
  void clear_antisymmetry() { antisym_pairs_.clear(); }

  bool is_zero() const {
    return std::all_of(components_.begin(), components_.end(), [](const Polynomial& p) { return p.is_zero(); });
  }

  // True iff a(..i..j..) = -a(..j..i..) componentwise, slots 1-based covariant.
  bool is_antisymmetric(std::size_t s1, std::size_t s2) const;

  // Checks every declared antisymmetric pair exactly.
  bool validate() const {
    return std::all_of(antisym_pairs_.begin(), antisym_pairs_.end(),
                       [this](const SlotPair& pr) { return is_antisymmetric(pr.first, pr.second); });
  }

  void check_cov_slot(std::size_t s) const {
    if (s < 1 || s > shape_.p)
      throw std::out_of_range("covariant slot " + std::to_string(s) + " outside 1.." + std::to_string(shape_.p));
  }
  void check_contra_slot(std::size_t s) const {
    if (s < 1 || s > shape_.q)
      throw std::out_of_range("contravariant slot " + std::to_string(s) + " outside 1.." +
                              std::to_string(shape_.q));
  }

  // Builds a field of the given shape by evaluating f at every 0-based multi-index.
  template <class F>
  static TensorField generate(TensorShape shape, F&& f) {
    TensorField t(shape);
    IndexCodec c = t.codec();
    std::vector<std::size_t> idx(shape.rank());
    for (std::size_t flat = 0; flat < t.components_.size(); ++flat) {
      c.decode(flat, idx);
      t.components_[flat] = f(std::span<const std::size_t>(idx));
    }
    return t;
  }

  TensorField operator-() const {
    TensorField r(*this);
    for (auto& c : r.components_) c = -c;
    return r;
  }
  TensorField operator+(const TensorField& o) const { return zip(o, std::plus<>{}, "tensor sum"); }
  TensorField operator-(const TensorField& o) const { return zip(o, std::minus<>{}, "tensor difference"); }
  TensorField operator*(const Rational& c) const {
    TensorField r(*this);
    for (auto& x : r.components_) x = x * c;
    return r;
  }
  friend TensorField operator*(const Rational& c, const TensorField& t) { return t * c; }
  TensorField& operator+=(const TensorField& o) { return *this = *this + o; }
  TensorField& operator-=(const TensorField& o) { return *this = *this - o; }

 private:
  std::size_t offset(std::initializer_list<std::size_t> cov, std::initializer_list<std::size_t> contra) const {
    if (cov.size() != shape_.p || contra.size() != shape_.q)
      throw std::out_of_range("index arity does not match tensor shape " + to_string(shape_));
    std::size_t flat = 0;
    auto push = [&](std::size_t v) {
      if (v < 1 || v > shape_.n)
        throw std::out_of_range("index value " + std::to_string(v) + " outside 1.." + std::to_string(shape_.n));
      flat = flat * shape_.n + (v - 1);
    };
    for (auto v : cov) push(v);
    for (auto v : contra) push(v);
    return flat;
  }

  template <class Op>
  TensorField zip(const TensorField& o, Op op, const char* what) const {
    require_same_shape(shape_, o.shape_, what);
    TensorField r(shape_);
    for (std::size_t i = 0; i < components_.size(); ++i) r.components_[i] = op(components_[i], o.components_[i]);
    for (const auto& pr : antisym_pairs_)
      if (std::find(o.antisym_pairs_.begin(), o.antisym_pairs_.end(), pr) != o.antisym_pairs_.end())
        r.antisym_pairs_.push_back(pr);
    return r;
  }

  TensorShape shape_{};
  std::vector<Polynomial> components_;
  std::vector<SlotPair> antisym_pairs_;
};

// Slot-index bijection applied to the covariant (or contravariant) indices:
// result(i_1..i_p) = a(i_perm[1] .. i_perm[p]), perm given 1-based.
inline std::vector<std::size_t> checked_permutation(std::span<const std::size_t> perm, std::size_t size) {
  if (perm.size() != size) throw std::invalid_argument("permutation has wrong length");
  std::vector<std::size_t> zero_based(size);
  std::vector<bool> seen(size, false);
  for (std::size_t i = 0; i < size; ++i) {
    if (perm[i] < 1 || perm[i] > size || seen[perm[i] - 1])
      throw std::invalid_argument("not a permutation of 1.." + std::to_string(size));
    seen[perm[i] - 1] = true;
    zero_based[i] = perm[i] - 1;
  }
  return zero_based;
}

inline bool TensorField::is_antisymmetric(std::size_t s1, std::size_t s2) const {
  check_cov_slot(s1);
  check_cov_slot(s2);
  IndexCodec c = codec();
  std::vector<std::size_t> idx(shape_.rank());
  for (std::size_t flat = 0; flat < components_.size(); ++flat) {
    c.decode(flat, idx);
    if (idx[s1 - 1] > idx[s2 - 1]) continue;
    std::swap(idx[s1 - 1], idx[s2 - 1]);
    const Polynomial& other = components_[c.encode(idx)];
    if (idx[s1 - 1] == idx[s2 - 1]) {
      if (!components_[flat].is_zero()) return false;
    } else if (!(components_[flat] + other).is_zero()) {
      return false;
    }
  }
  return true;
}

// a's slots precede b's: result(a_cov, b_cov; a_contra, b_contra) = a(..) * b(..).
inline TensorField tensor_product(const TensorField& a, const TensorField& b) {
  require_same_dimension(a.dimension(), b.dimension(), "tensor product");
  const auto& sa = a.shape();
  const auto& sb = b.shape();
  TensorShape out{sa.p + sb.p, sa.q + sb.q, sa.n};
  IndexCodec ca = a.codec(), cb = b.codec();
  std::vector<std::size_t> ia(sa.rank()), ib(sb.rank());
  return TensorField::generate(out, [&](std::span<const std::size_t> idx) {
    std::copy_n(idx.begin(), sa.p, ia.begin());
    std::copy_n(idx.begin() + sa.p, sb.p, ib.begin());
    std::copy_n(idx.begin() + sa.p + sb.p, sa.q, ia.begin() + sa.p);
    std::copy_n(idx.begin() + sa.p + sb.p + sa.q, sb.q, ib.begin() + sb.p);
    const Polynomial& x = a[ca.encode(ia)];
    if (x.is_zero()) return Polynomial(out.n);
    return x * b[cb.encode(ib)];
  });
}

// Trace over covariant slot `cov_slot` and contravariant slot `contra_slot` (1-based).
inline TensorField contract(const TensorField& a, std::size_t cov_slot, std::size_t contra_slot) {
  a.check_cov_slot(cov_slot);
  a.check_contra_slot(contra_slot);
  const auto& s = a.shape();
  TensorShape out{s.p - 1, s.q - 1, s.n};
  IndexCodec ca = a.codec();
  std::size_t cov_pos = cov_slot - 1;
  std::size_t contra_pos = s.p + contra_slot - 1;
  std::vector<std::size_t> src(s.rank());
  return TensorField::generate(out, [&](std::span<const std::size_t> idx) {
    // Re-insert the two traced positions into the output multi-index.
    std::size_t k = 0;
    for (std::size_t i = 0; i < s.rank(); ++i)
      if (i != cov_pos && i != contra_pos) src[i] = idx[k++];
    Polynomial sum(s.n);
    for (std::size_t m = 0; m < s.n; ++m) {
      src[cov_pos] = m;
      src[contra_pos] = m;
      sum += a[ca.encode(src)];
    }
    return sum;
  });
}

inline TensorField permute_slots(const TensorField& a, std::span<const std::size_t> cov_perm,
                                 std::span<const std::size_t> contra_perm) {
  const auto& s = a.shape();
  auto cp = checked_permutation(cov_perm, s.p);
  auto up = checked_permutation(contra_perm, s.q);
  IndexCodec ca = a.codec();
  std::vector<std::size_t> src(s.rank());
  return TensorField::generate(s, [&](std::span<const std::size_t> idx) {
    for (std::size_t i = 0; i < s.p; ++i) src[i] = idx[cp[i]];
    for (std::size_t i = 0; i < s.q; ++i) src[s.p + i] = idx[s.p + up[i]];
    return a[ca.encode(src)];
  });
}

inline TensorField permute_covariant(const TensorField& a, std::span<const std::size_t> perm) {
  std::vector<std::size_t> id(a.shape().q);
  std::iota(id.begin(), id.end(), std::size_t{1});
  return permute_slots(a, perm, id);
}
inline TensorField permute_covariant(const TensorField& a, std::initializer_list<std::size_t> perm) {
  return permute_covariant(a, std::span<const std::size_t>(perm.begin(), perm.size()));
}

// a (x) delta (x) ... (x) delta, r copies.
inline TensorField insert_delta(const TensorField& a, std::size_t r) {
  TensorField out = a;
  if (r == 0) return out;
  TensorField d = TensorField::delta(a.dimension());
  for (std::size_t i = 0; i < r; ++i) out = tensor_product(out, d);
  return out;
}

// a - a∘swap(s1,s2), no 1/2.
inline TensorField antisymmetrize_pair(const TensorField& a, std::size_t s1, std::size_t s2) {
  a.check_cov_slot(s1);
  a.check_cov_slot(s2);
  if (s1 == s2) throw std::invalid_argument("antisymmetrize_pair needs two distinct slots");
  std::vector<std::size_t> perm(a.shape().p);
  std::iota(perm.begin(), perm.end(), std::size_t{1});
  std::swap(perm[s1 - 1], perm[s2 - 1]);
  TensorField r = a - permute_covariant(a, perm);
  r.clear_antisymmetry();
  r.declare_antisymmetric(s1, s2);
  return r;
}

inline bool equal(const TensorField& a, const TensorField& b) {
  require_same_shape(a.shape(), b.shape(), "tensor equality");
  return std::equal(a.components().begin(), a.components().end(), b.components().begin());
}

}  // namespace nabla
