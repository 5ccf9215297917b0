#pragma once

#include "idemcalc/algebra.hpp"
#include "idemcalc/linalg.hpp"

#include "doctest.h"

#include <random>
#include <string>

namespace doctest {
template <>
struct StringMaker<idem::RatMatrix> {
  static String convert(const idem::RatMatrix& m) { return m.str().c_str(); }
};
template <>
struct StringMaker<idem::Rational> {
  static String convert(const idem::Rational& q) { return q.get_str().c_str(); }
};
}  // namespace doctest

namespace testing {

using idem::RatMatrix;
using idem::Rational;

inline Rational q(long n, long d = 1) { return idem::make_rational(n, d); }

/// Small random rationals: numerator in [-bound, bound], denominator 1..3.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  Rational entry(int bound = 9) {
    std::uniform_int_distribution<long> num(-bound, bound), den(1, 3);
    return idem::make_rational(num(rng_), den(rng_));
  }
  RatMatrix matrix(std::size_t r, std::size_t c, double density = 1.0, int bound = 9) {
    RatMatrix m(r, c);
    std::bernoulli_distribution keep(density);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j)
        if (keep(rng_)) m(i, j) = entry(bound);
    return m;
  }
  /// Product of a random r x k and k x c matrix, so rank is at most k.
  RatMatrix low_rank(std::size_t r, std::size_t c, std::size_t k) { return matrix(r, k) * matrix(k, c); }
  std::size_t index(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_); }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// Textbook triple loop on mpq values, kept apart from the library kernel.
inline RatMatrix naive_product(const RatMatrix& a, const RatMatrix& b) {
  RatMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Rational s = 0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

}  // namespace testing
