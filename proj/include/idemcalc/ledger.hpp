#pragma once

#include "idemcalc/algebra.hpp"
#include "idemcalc/realization.hpp"
#include "idemcalc/report.hpp"

#include <string>
#include <vector>

namespace idem {

class LedgerError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Projectors p_0..p_{2d} over one context together with the graded
/// homology they are supposed to project onto. Names key the realization
/// actions.
class KunnethLedger {
 public:
  KunnethLedger() = default;
  /// Checks shapes only (count 2d+1, shared context, homology size); the
  /// algebraic conditions are reported by verify_ck.
  KunnethLedger(int d, std::vector<Element> projectors, GradedHomology homology,
                std::vector<std::string> names = {});

  int d() const noexcept { return d_; }
  std::size_t size() const noexcept { return projectors_.size(); }
  const ContextPtr& context() const { return projectors_.front().context(); }
  const Element& operator[](std::size_t i) const { return projectors_[i]; }
  const std::vector<Element>& projectors() const noexcept { return projectors_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const GradedHomology& homology() const noexcept { return homology_; }

  friend bool operator==(const KunnethLedger& a, const KunnethLedger& b) {
    return a.d_ == b.d_ && a.projectors_ == b.projectors_ && a.names_ == b.names_ && a.homology_ == b.homology_ &&
           *a.context() == *b.context();
  }

 private:
  int d_ = 0;
  std::vector<Element> projectors_;
  std::vector<std::string> names_;
  GradedHomology homology_;
};

/// Diagonal model: p_i is the coordinate projection onto the degree-i
/// coordinates. Names default to "p<i>".
KunnethLedger diagonal_ledger(const ContextPtr& ctx, const GradedHomology& h);

/// One factorization p_degree = f·g through a small carrier.
struct CertificateFactor {
  std::size_t degree = 0;
  std::string carrier;  ///< "point", "surface" or "curve-h1"
  int twist = 0;
  RatMatrix f;
  RatMatrix g;

  friend bool operator==(const CertificateFactor&, const CertificateFactor&) = default;
};

struct SpecialLedgerCertificate {
  std::vector<CertificateFactor> factors;

  friend bool operator==(const SpecialLedgerCertificate&, const SpecialLedgerCertificate&) = default;
};

/// ck.idempotent, ck.orthogonal, ck.sum, ck.homology_invariant, ck.kunneth.
Report verify_ck(const KunnethLedger& L);

bool check_self_dual(const KunnethLedger& L);
/// First i with involute(p_i) != p_{2d-i}.
std::optional<std::size_t> first_ledger_duality_failure(const KunnethLedger& L);

/// certificate.special: every degree has exactly one factorization with
/// f·g = p, even degrees through point/surface carriers and odd degrees
/// through curve-h1 carriers.
CheckResult verify_certificate(const KunnethLedger& L, const SpecialLedgerCertificate& cert);

/// realization.valid: the finite compatibility conditions the checkers rely
/// on (levels 0..d, shapes, ρ(p)² = ρ(p), ρ(p_i)ρ(p_j) = 0, Σρ(p_i) = 1 and
/// intertwining with the cycle class).
CheckResult validate_realization(const KunnethLedger& L, const ChowRealization& W);

/// F⁰ ⊇ F¹ ⊇ ... with F^i = ∩_{j<i} ker ρ_l(p_{2l+j}); entries i = 0..2d-2l+1.
std::vector<Subspace> murre_filtration(const KunnethLedger& L, const ChowRealization& W, std::size_t l);

/// murre.B: ρ_l(p_j) = 0 for j < 2l and j > d+l. Location (j, l).
CheckResult check_murre_B(const KunnethLedger& L, const ChowRealization& W);
/// murre.D: F¹ CH_l = ker(cycle_class_l) at every level. Location (l).
CheckResult check_murre_D(const KunnethLedger& L, const ChowRealization& W);
/// murre.C: the two filtrations coincide at every (l, i). Throws
/// LedgerError when the ledgers do not share a carrier.
CheckResult compare_filtrations(const KunnethLedger& L1, const KunnethLedger& L2, const ChowRealization& W);

/// q_l = Σ_{i+j=l} kron(p_i, p_j) on the Kronecker carrier, pairing
/// kron(J_X, J_C). Names are "q<l>".
KunnethLedger product_ledger(const KunnethLedger& LX, const KunnethLedger& LC);

/// Level l of the product is ⊕_{a+b=l} W^X_a ⊗ W^C_b with the induced
/// actions of the q_m and cycle class cl_a ⊗ cl_b placed into H_{2l}.
ChowRealization product_realization(const KunnethLedger& LX, const ChowRealization& WX, const KunnethLedger& LC,
                                    const ChowRealization& WC);

}  // namespace idem
