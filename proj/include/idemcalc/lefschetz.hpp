#pragma once

#include "idemcalc/algebra.hpp"
#include "idemcalc/report.hpp"

#include <optional>
#include <span>
#include <string>

namespace idem {

class LefschetzError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// L together with the pair (π_i, π_dual); π_dual plays π_{2d-i}. The twist
/// d-i is carried as metadata only.
struct LefschetzDatum {
  Element L;
  std::size_t degree = 0;
  Element pi;
  Element pi_dual;
};

/// Throws LefschetzError unless π_i and π_dual are idempotent, mutually
/// orthogonal and share L's context.
void validate_datum(const LefschetzDatum& D);

/// m = π_i∘L∘π_dual, the morphism (X, π_dual) → (X, π_i).
Element lefschetz_morphism(const LefschetzDatum& D);

struct LefschetzOutcome {
  Element m;
  std::optional<Element> beta;  ///< set iff certified
  std::string refusal;          ///< "rank", "right" or "left" when refused
  std::string detail;

  bool certified() const { return beta.has_value(); }
};

/// Decides invertibility of m by solving m·X = π_i and checking the left
/// identity on β = π_dual·X·π_i.
LefschetzOutcome lefschetz_certify(const LefschetzDatum& D);

/// β∘m = π_dual and m∘β = π_i, recomputed from scratch.
bool verify_inverse(const LefschetzDatum& D, const Element& beta);

/// Point/curve recipe: given f·g = π_i and g·f = 1 on a small carrier with
/// π_dual = π_i*, returns π_dual·g*·α·g·π_i where α inverts g·L·g*. Throws
/// LefschetzError on a singular corner or failed precondition.
Element inverse_via_factorization(const LefschetzDatum& D, const RatMatrix& f, const RatMatrix& g);

/// Surface recipe: requires Gf·L·Gf* = m·1, m != 0; returns
/// (1/m)·π_dual·Gf*·Gf·π_i.
Element surface_case_inverse(const LefschetzDatum& D, const RatMatrix& Gf, const Rational& m_scalar);

/// target∘x∘source = 0 for every supplied x (a claimed vanishing Hom space
/// spanned by the generators).
bool corner_vanishes(const Element& source, const Element& target, std::span<const Element> generators);

}  // namespace idem
