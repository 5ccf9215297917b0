#include "idemcalc/linalg.hpp"

#include <algorithm>

namespace idem {
namespace {

// Row-wise integer copy: each row scaled by the lcm of its denominators.
std::vector<std::vector<mpz_class>> integer_rows(const RatMatrix& a) {
  std::vector<std::vector<mpz_class>> rows(a.rows(), std::vector<mpz_class>(a.cols()));
  mpz_class lcm;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    lcm = 1;
    for (std::size_t c = 0; c < a.cols(); ++c) {
      const auto& x = a(r, c);
      if (x.get_den() != 1) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den_mpz_t());
    }
    for (std::size_t c = 0; c < a.cols(); ++c) {
      const auto& x = a(r, c);
      if (sgn(x) == 0) continue;
      mpz_divexact(rows[r][c].get_mpz_t(), lcm.get_mpz_t(), x.get_den_mpz_t());
      rows[r][c] *= x.get_num();
    }
  }
  return rows;
}

}  // namespace

Echelon rref(const RatMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  auto rows = integer_rows(a);

  // Bareiss forward elimination with column skipping; every division is exact.
  std::vector<std::size_t> pivots;
  mpz_class prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    std::size_t p = r;
    while (p < m && sgn(rows[p][c]) == 0) ++p;
    if (p == m) continue;
    std::swap(rows[p], rows[r]);
    const mpz_class& piv = rows[r][c];
    for (std::size_t i = r + 1; i < m; ++i) {
      const mpz_class lead = rows[i][c];
      for (std::size_t j = c + 1; j < n; ++j) {
        mpz_class v = piv * rows[i][j];
        v -= lead * rows[r][j];
        mpz_divexact(rows[i][j].get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
      }
      rows[i][c] = 0;
      // Entries left of c in row i are already zero.
    }
    prev = piv;
    pivots.push_back(c);
    ++r;
  }

  const std::size_t rk = pivots.size();
  RatMatrix red(rk, n);
  for (std::size_t i = 0; i < rk; ++i) {
    const mpz_class& piv = rows[i][pivots[i]];
    for (std::size_t j = pivots[i]; j < n; ++j) {
      if (sgn(rows[i][j]) == 0) continue;
      Rational q(rows[i][j], piv);
      q.canonicalize();
      red(i, j) = std::move(q);
    }
  }
  // Back-substitution over the rationals on normalized rows.
  for (std::size_t i = rk; i-- > 0;) {
    const std::size_t pc = pivots[i];
    for (std::size_t u = 0; u < i; ++u) {
      const Rational f = red(u, pc);
      if (sgn(f) == 0) continue;
      for (std::size_t j = pc; j < n; ++j)
        if (sgn(red(i, j)) != 0) red(u, j) -= f * red(i, j);
    }
  }
  return {std::move(red), std::move(pivots)};
}

std::size_t rank(const RatMatrix& a) { return rref(a).pivots.size(); }

std::vector<Vector> kernel_basis(const RatMatrix& a) {
  const auto e = rref(a);
  const std::size_t n = a.cols();
  std::vector<bool> is_pivot(n, false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<Vector> out;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    Vector v(n);
    v[f] = 1;
    for (std::size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = -e.reduced(i, f);
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<Vector> image_basis(const RatMatrix& a) {
  const auto e = rref(a.transpose());
  std::vector<Vector> out;
  for (std::size_t i = 0; i < e.reduced.rows(); ++i) {
    const auto row = e.reduced.row(i);
    out.emplace_back(row.begin(), row.end());
  }
  return out;
}

std::optional<RatMatrix> solve_all(const RatMatrix& a, const RatMatrix& b) {
  if (a.rows() != b.rows())
    throw ShapeError("solve_all: lhs has " + std::to_string(a.rows()) + " rows, rhs " + std::to_string(b.rows()));
  const std::size_t n = a.cols(), k = b.cols();
  const auto e = rref(a.hstack(b));
  RatMatrix x(n, k);
  for (std::size_t i = 0; i < e.pivots.size(); ++i) {
    const std::size_t pc = e.pivots[i];
    if (pc >= n) return std::nullopt;  // pivot in the augmented block: inconsistent
    for (std::size_t j = 0; j < k; ++j) x(pc, j) = e.reduced(i, n + j);
  }
  return x;
}

std::optional<RatMatrix> inverse(const RatMatrix& a) {
  if (!a.square()) throw ShapeError("inverse of a non-square matrix");
  if (rank(a) != a.rows()) return std::nullopt;
  return solve_all(a, RatMatrix::identity(a.rows()));
}

RatMatrix kronecker(const RatMatrix& a, const RatMatrix& b) {
  RatMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Rational& s = a(i, j);
      if (sgn(s) == 0) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          if (sgn(b(k, l)) != 0) out(i * b.rows() + k, j * b.cols() + l) = s * b(k, l);
    }
  return out;
}

Subspace::Subspace(std::size_t ambient) : ambient_(ambient), basis_(0, ambient) {}

Subspace Subspace::full(std::size_t ambient) {
  Subspace s(ambient);
  s.basis_ = RatMatrix::identity(ambient);
  return s;
}

Subspace Subspace::span(std::size_t ambient, const std::vector<Vector>& vectors) {
  Subspace s(ambient);
  if (vectors.empty()) return s;
  RatMatrix rows(vectors.size(), ambient);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != ambient) throw ShapeError("span: vector length mismatch");
    for (std::size_t j = 0; j < ambient; ++j) rows(i, j) = vectors[i][j];
  }
  s.basis_ = rref(rows).reduced;
  if (s.basis_.rows() == 0) s.basis_ = RatMatrix(0, ambient);
  return s;
}

Subspace Subspace::kernel(const RatMatrix& a) { return span(a.cols(), kernel_basis(a)); }
Subspace Subspace::image(const RatMatrix& a) { return span(a.rows(), image_basis(a)); }

std::vector<Vector> Subspace::basis() const {
  std::vector<Vector> out;
  for (std::size_t i = 0; i < basis_.rows(); ++i) {
    const auto row = basis_.row(i);
    out.emplace_back(row.begin(), row.end());
  }
  return out;
}

bool Subspace::contains(const Vector& v) const {
  if (v.size() != ambient_) throw ShapeError("contains: vector length mismatch");
  auto vs = basis();
  vs.push_back(v);
  return span(ambient_, vs).dim() == dim();
}

bool Subspace::contains(const Subspace& other) const { return sum(other).dim() == dim(); }

Subspace Subspace::sum(const Subspace& other) const {
  if (other.ambient_ != ambient_) throw ShapeError("subspace ambient mismatch");
  auto vs = basis();
  for (auto& v : other.basis()) vs.push_back(std::move(v));
  return span(ambient_, vs);
}

Subspace Subspace::intersect(const Subspace& other) const {
  if (other.ambient_ != ambient_) throw ShapeError("subspace ambient mismatch");
  // U ∩ W = ker of the stacked annihilators of U and W.
  auto annihilator = [this](const Subspace& s) {
    const auto ann = kernel_basis(s.basis_);  // vectors orthogonal to every basis row
    RatMatrix rows(ann.size(), ambient_);
    for (std::size_t i = 0; i < ann.size(); ++i)
      for (std::size_t j = 0; j < ambient_; ++j) rows(i, j) = ann[i][j];
    return rows;
  };
  const RatMatrix stacked = annihilator(*this).vstack(annihilator(other));
  if (stacked.rows() == 0) return full(ambient_);
  return kernel(stacked);
}

}  // namespace idem
