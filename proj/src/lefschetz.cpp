#include "idemcalc/lefschetz.hpp"

#include "idemcalc/linalg.hpp"

namespace idem {

void validate_datum(const LefschetzDatum& D) {
  if (!same_context(D.L, D.pi) || !same_context(D.L, D.pi_dual))
    throw LefschetzError("lefschetz datum: elements live in different contexts");
  if (!is_idempotent(D.pi)) throw LefschetzError("lefschetz datum: pi is not idempotent");
  if (!is_idempotent(D.pi_dual)) throw LefschetzError("lefschetz datum: pi_dual is not idempotent");
  if (!compose(D.pi, D.pi_dual).is_zero() || !compose(D.pi_dual, D.pi).is_zero())
    throw LefschetzError("lefschetz datum: pi and pi_dual are not mutually orthogonal");
}

Element lefschetz_morphism(const LefschetzDatum& D) { return compose(D.pi, compose(D.L, D.pi_dual)); }

bool verify_inverse(const LefschetzDatum& D, const Element& beta) {
  const Element m = lefschetz_morphism(D);
  return compose(beta, m) == D.pi_dual && compose(m, beta) == D.pi;
}

LefschetzOutcome lefschetz_certify(const LefschetzDatum& D) {
  validate_datum(D);
  LefschetzOutcome out{lefschetz_morphism(D), std::nullopt, {}, {}};
  const std::size_t ri = rank(D.pi.mat());
  const std::size_t rd = rank(D.pi_dual.mat());
  if (ri != rd) {
    out.refusal = "rank";
    out.detail = "rank(pi) = " + std::to_string(ri) + " but rank(pi_dual) = " + std::to_string(rd);
    return out;
  }
  const auto x = solve_all(out.m.mat(), D.pi.mat());
  if (!x) {
    out.refusal = "right";
    out.detail = "no beta with m∘beta = pi";
    return out;
  }
  Element beta(D.L.context(), chain(D.pi_dual.mat(), *x, D.pi.mat()));
  if (compose(beta, out.m) != D.pi_dual) {
    out.refusal = "left";
    out.detail = "beta∘m differs from pi_dual";
    return out;
  }
  out.beta = std::move(beta);
  return out;
}

Element inverse_via_factorization(const LefschetzDatum& D, const RatMatrix& f, const RatMatrix& g) {
  validate_datum(D);
  const InvolutiveContext& ctx = *D.L.context();
  const std::size_t n = ctx.dim();
  if (f.rows() != n || g.cols() != n || f.cols() != g.rows())
    throw LefschetzError("inverse_via_factorization: f must be n x k and g k x n");
  if (matmul(f, g) != D.pi.mat()) throw LefschetzError("inverse_via_factorization: f·g differs from pi");
  if (matmul(g, f) != RatMatrix::identity(g.rows()))
    throw LefschetzError("inverse_via_factorization: g·f is not the identity of the small carrier");
  const RatMatrix g_star = ctx.involute_to_carrier(g);
  const auto alpha = inverse(chain(g, D.L.mat(), g_star));
  if (!alpha) throw LefschetzError("inverse_via_factorization: corner element is singular");
  Element beta(D.L.context(), chain(D.pi_dual.mat(), g_star, *alpha, g, D.pi.mat()));
  if (!verify_inverse(D, beta)) throw LefschetzError("inverse_via_factorization: result is not a two-sided inverse");
  return beta;
}

Element surface_case_inverse(const LefschetzDatum& D, const RatMatrix& Gf, const Rational& m_scalar) {
  validate_datum(D);
  if (sgn(m_scalar) == 0) throw LefschetzError("surface_case_inverse: m must be nonzero");
  const InvolutiveContext& ctx = *D.L.context();
  if (Gf.cols() != ctx.dim()) throw LefschetzError("surface_case_inverse: Gf must have n columns");
  const RatMatrix gf_star = ctx.involute_to_carrier(Gf);
  if (chain(Gf, D.L.mat(), gf_star) != m_scalar * RatMatrix::identity(Gf.rows()))
    throw LefschetzError("surface_case_inverse: Gf·L·Gf* differs from m times the identity");
  const Rational inv_m = 1 / m_scalar;
  Element beta(D.L.context(), inv_m * chain(D.pi_dual.mat(), gf_star, Gf, D.pi.mat()));
  if (!verify_inverse(D, beta)) throw LefschetzError("surface_case_inverse: result is not a two-sided inverse");
  return beta;
}

bool corner_vanishes(const Element& source, const Element& target, std::span<const Element> generators) {
  for (const auto& x : generators)
    if (!compose(target, compose(x, source)).is_zero()) return false;
  return true;
}

}  // namespace idem
