#pragma once

#include "idemcalc/matrix.hpp"

#include <optional>
#include <vector>

namespace idem {

struct Echelon {
  RatMatrix reduced;                 ///< reduced row echelon form, zero rows removed
  std::vector<std::size_t> pivots;  ///< pivot column of each row of `reduced`
};

/// Reduced row echelon form. Forward elimination is fraction-free (Bareiss)
/// on an integer copy of the rows; only the final back-substitution runs
/// over the rationals.
Echelon rref(const RatMatrix& a);

std::size_t rank(const RatMatrix& a);

/// Null space basis read off the rref: one vector per free column, in
/// increasing column order, with a 1 in that column.
std::vector<Vector> kernel_basis(const RatMatrix& a);

/// Canonical column space basis: the nonzero rows of rref(aᵀ), so every
/// vector has leading entry 1 and equal images give identical bases.
std::vector<Vector> image_basis(const RatMatrix& a);

/// Some x with a·x = b (free variables set to zero), or nullopt.
std::optional<RatMatrix> solve_all(const RatMatrix& a, const RatMatrix& b);

/// Two-sided inverse of a square matrix, or nullopt if singular.
std::optional<RatMatrix> inverse(const RatMatrix& a);

RatMatrix kronecker(const RatMatrix& a, const RatMatrix& b);

/// Subspace of Q^n stored by its rref-canonical basis, so equality of
/// subspaces is equality of the stored matrices.
class Subspace {
 public:
  explicit Subspace(std::size_t ambient = 0);  ///< the zero subspace
  static Subspace full(std::size_t ambient);
  static Subspace span(std::size_t ambient, const std::vector<Vector>& vectors);
  static Subspace kernel(const RatMatrix& a);
  static Subspace image(const RatMatrix& a);

  std::size_t ambient() const noexcept { return ambient_; }
  std::size_t dim() const noexcept { return basis_.rows(); }
  const RatMatrix& canonical_rows() const noexcept { return basis_; }
  std::vector<Vector> basis() const;

  bool contains(const Vector& v) const;
  bool contains(const Subspace& other) const;
  Subspace intersect(const Subspace& other) const;
  Subspace sum(const Subspace& other) const;

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }

 private:
  std::size_t ambient_;
  RatMatrix basis_;
};

}  // namespace idem
