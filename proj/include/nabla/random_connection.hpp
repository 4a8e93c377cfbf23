#pragma once

// Reproducible random polynomial connections.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard.  Range reduction is done here by rejection sampling rather than
// std::uniform_int_distribution, whose algorithm varies between standard
// libraries.  Given equal specs, every platform produces the same connections.
//
// Sampling, per connection:
//   1. choose `density` distinct (l, i, j) positions by a partial Fisher-Yates
//      shuffle of the n^3 positions in flat order;
//   2. for each position draw 1..3 terms; each term has total degree uniform in
//      0..max_degree, each unit of degree assigned to a uniformly chosen
//      variable, and a nonzero integer coefficient uniform in
//      [-coefficient_bound, coefficient_bound].

#include "nabla/geometry.hpp"

#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace nabla {

struct RandomConnectionSpec {
  std::uint64_t seed = 1;
  std::size_t dimension = 4;
  std::size_t max_degree = 2;
  long coefficient_bound = 3;
  std::size_t density = 6;
};

class ConnectionSampler {
 public:
  explicit ConnectionSampler(RandomConnectionSpec spec) : spec_(spec), engine_(spec.seed) {
    if (spec_.dimension == 0) throw std::invalid_argument("random connection: dimension must be positive");
    if (spec_.coefficient_bound < 1) throw std::invalid_argument("random connection: coefficient bound must be >= 1");
    std::size_t n = spec_.dimension;
    if (spec_.density > n * n * n) throw std::invalid_argument("random connection: density exceeds n^3");
  }

  const RandomConnectionSpec& spec() const { return spec_; }

  // Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    std::uint64_t limit = engine_.max() - (engine_.max() % bound);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  Connection next() {
    std::size_t n = spec_.dimension;
    std::vector<std::size_t> slots(n * n * n);
    std::iota(slots.begin(), slots.end(), std::size_t{0});
    for (std::size_t k = 0; k < spec_.density; ++k) std::swap(slots[k], slots[k + below(slots.size() - k)]);
    Connection c(n);
    for (std::size_t k = 0; k < spec_.density; ++k) {
      std::size_t flat = slots[k];
      std::size_t l = flat / (n * n), i = (flat / n) % n, j = flat % n;
      c.set(l + 1, i + 1, j + 1, random_polynomial());
    }
    return c;
  }

 private:
  Polynomial random_polynomial() {
    std::size_t n = spec_.dimension;
    std::vector<Term> terms;
    std::size_t count = 1 + below(3);
    auto b = static_cast<std::uint64_t>(spec_.coefficient_bound);
    for (std::size_t t = 0; t < count; ++t) {
      std::vector<Monomial::Exponent> exps(n, 0);
      std::size_t degree = below(spec_.max_degree + 1);
      for (std::size_t d = 0; d < degree; ++d) ++exps[below(n)];
      auto r = static_cast<long>(below(2 * b));
      long coeff = r < static_cast<long>(b) ? r - static_cast<long>(b) : r - static_cast<long>(b) + 1;
      terms.push_back({Monomial(std::move(exps)), Rational(coeff)});
    }
    return Polynomial(n, std::move(terms));
  }

  RandomConnectionSpec spec_;
  std::mt19937_64 engine_;
};

inline std::vector<Connection> random_connections(const RandomConnectionSpec& spec, std::size_t count) {
  ConnectionSampler sampler(spec);
  std::vector<Connection> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(sampler.next());
  return out;
}

}  // namespace nabla
