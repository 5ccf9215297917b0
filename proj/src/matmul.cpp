// Exact matrix product. Both operands are brought to a common denominator
// so the inner loop runs on integers: machine 128-bit accumulators when the
// bit budget allows, GMP integers otherwise. Each output entry is reduced
// to lowest terms once.
#include "idemcalc/matrix.hpp"

#include <algorithm>
#include <cstdint>

namespace idem {
namespace {

struct ScaledMatrix {
  std::vector<mpz_class> num;
  mpz_class den = 1;
  std::size_t max_bits = 0;
};

ScaledMatrix scale_to_integers(const RatMatrix& m) {
  ScaledMatrix s;
  const auto entries = m.entries();
  for (const auto& x : entries)
    if (x.get_den() != 1) mpz_lcm(s.den.get_mpz_t(), s.den.get_mpz_t(), x.get_den_mpz_t());
  s.num.resize(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& x = entries[i];
    if (sgn(x) == 0) continue;
    if (s.den == 1) {
      s.num[i] = x.get_num();
    } else {
      mpz_divexact(s.num[i].get_mpz_t(), s.den.get_mpz_t(), x.get_den_mpz_t());
      s.num[i] *= x.get_num();
    }
    s.max_bits = std::max(s.max_bits, mpz_sizeinbase(s.num[i].get_mpz_t(), 2));
  }
  return s;
}

void assign_int128(mpz_class& out, __int128 v) {
  const bool negative = v < 0;
  unsigned __int128 u = negative ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  const auto hi = static_cast<std::uint64_t>(u >> 64);
  const auto lo = static_cast<std::uint64_t>(u);
  mpz_set_ui(out.get_mpz_t(), hi);
  mpz_mul_2exp(out.get_mpz_t(), out.get_mpz_t(), 64);
  mpz_add_ui(out.get_mpz_t(), out.get_mpz_t(), lo);
  if (negative) mpz_neg(out.get_mpz_t(), out.get_mpz_t());
}

std::size_t bit_length(std::size_t n) {
  std::size_t b = 0;
  while (n) {
    ++b;
    n >>= 1;
  }
  return b;
}

}  // namespace

RatMatrix matmul(const RatMatrix& a, const RatMatrix& b) {
  if (a.cols() != b.rows())
    throw ShapeError("matmul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " times " +
                     std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  const std::size_t n = a.rows(), inner = a.cols(), m = b.cols();
  RatMatrix out(n, m);
  if (n == 0 || m == 0 || inner == 0) return out;

  const ScaledMatrix sa = scale_to_integers(a);
  const ScaledMatrix sb = scale_to_integers(b);
  const mpz_class den = sa.den * sb.den;
  const bool reduce = den != 1;

  auto store = [&](std::size_t i, std::size_t j, const mpz_class& value) {
    Rational& q = out(i, j);
    mpz_set(q.get_num_mpz_t(), value.get_mpz_t());
    mpz_set(q.get_den_mpz_t(), den.get_mpz_t());
    if (reduce) q.canonicalize();
  };

  const bool fits = sa.max_bits <= 62 && sb.max_bits <= 62 && sa.max_bits + sb.max_bits + bit_length(inner) <= 125;
  if (fits) {
    std::vector<std::int64_t> ia(n * inner), ib(inner * m);
    for (std::size_t i = 0; i < ia.size(); ++i) ia[i] = mpz_get_si(sa.num[i].get_mpz_t());
    for (std::size_t i = 0; i < ib.size(); ++i) ib[i] = mpz_get_si(sb.num[i].get_mpz_t());
    std::vector<__int128> acc(m);
    mpz_class tmp;
    for (std::size_t i = 0; i < n; ++i) {
      std::fill(acc.begin(), acc.end(), 0);
      for (std::size_t k = 0; k < inner; ++k) {
        const std::int64_t x = ia[i * inner + k];
        if (x == 0) continue;
        const std::int64_t* brow = &ib[k * m];
        for (std::size_t j = 0; j < m; ++j) acc[j] += static_cast<__int128>(x) * brow[j];
      }
      for (std::size_t j = 0; j < m; ++j) {
        if (acc[j] == 0) continue;
        assign_int128(tmp, acc[j]);
        store(i, j, tmp);
      }
    }
    return out;
  }

  std::vector<mpz_class> acc(m);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& x : acc) x = 0;
    for (std::size_t k = 0; k < inner; ++k) {
      const mpz_class& x = sa.num[i * inner + k];
      if (sgn(x) == 0) continue;
      for (std::size_t j = 0; j < m; ++j) {
        const mpz_class& y = sb.num[k * m + j];
        if (sgn(y) != 0) mpz_addmul(acc[j].get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
      }
    }
    for (std::size_t j = 0; j < m; ++j)
      if (sgn(acc[j]) != 0) store(i, j, acc[j]);
  }
  return out;
}

}  // namespace idem
