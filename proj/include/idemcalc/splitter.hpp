#pragma once

#include "idemcalc/algebra.hpp"
#include "idemcalc/realization.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace idem {

/// A family violates π_i∘π_j = 0 for a pair the formula requires.
class HypothesisError : public std::invalid_argument {
 public:
  HypothesisError(std::size_t i, std::size_t j, std::size_t k);
  std::size_t i, j, k;
};

/// A splitting precondition failed; `condition` names which one.
class SplitError : public std::invalid_argument {
 public:
  SplitError(std::string condition, const std::string& detail);
  std::string condition;
};

/// Raw Gram–Schmidt formula with coefficient ½, no hypothesis check:
///   p_i = (1-½π_n)···(1-½π_{i+1}) · π_i · (1-½π_{i-1})···(1-½π_0).
/// Works in any matrix realization since it only multiplies and adds.
std::vector<RatMatrix> gs_formula(std::span<const RatMatrix> members);

/// One pass. Requires fam[i]∘fam[j] = 0 whenever i - j < k and i != j
/// (throws HypothesisError on the first offending pair); the result then
/// satisfies the same condition for k + 1. Output names get a "'" suffix.
IdempotentFamily gram_schmidt_pass(const IdempotentFamily& fam, std::size_t k);

/// u = π∘p and v = p∘π; `valid` iff v∘u = p and u∘v = π.
struct IsomorphismWitness {
  Element u;
  Element v;
  bool valid = false;
};

IsomorphismWitness isomorphism_witness(const Element& pi, const Element& p);

struct GSReport {
  IdempotentFamily input;
  IdempotentFamily output;
  std::size_t passes_run = 0;
  /// Family after t passes, t = 0..passes_run (stages[0] is the input).
  std::vector<IdempotentFamily> stages;
  /// Orthogonality table of each stage.
  std::vector<OrthTable> tables;
  /// pass_witnesses[t][r] relates stages[t][r] and stages[t+1][r].
  std::vector<std::vector<IsomorphismWitness>> pass_witnesses;
  /// Composite witnesses input[r] ↔ output[r]:
  /// u = π_r∘p_r^(1)∘···∘p_r^(T), v = p_r^(T)∘···∘p_r^(1)∘π_r.
  std::vector<IsomorphismWitness> witnesses;

  bool output_orthogonal() const { return tables.empty() || fully_orthogonal(tables.back()); }
  bool witnesses_valid() const;
};

/// Repeats the pass with k = 1, 2, ... until the orthogonality table is
/// clean, at most max_passes times (default: family size - 1). Requires
/// fam[i]∘fam[j] = 0 for all i < j. Output names get a ".gs" suffix when at
/// least one pass ran.
GSReport orthonormalize(const IdempotentFamily& fam, std::optional<std::size_t> max_passes = std::nullopt);

/// Adds actions for the report's output members to every level of W by
/// replaying the passes on the ρ-images of the input members.
ChowRealization extend_with_outputs(const ChowRealization& w, const GSReport& report);

/// Elementwise: ρ_l(in[r]) = ρ_l(out[r]) at every level. Throws
/// MissingAction if W lacks either member.
bool action_agreement(const IdempotentFamily& in, const IdempotentFamily& out, std::size_t r,
                      const ChowRealization& w);

/// Weaker form: ρ_l(in[r]) and ρ_l(out[r]) have the same image at every level.
bool action_image_agreement(const IdempotentFamily& in, const IdempotentFamily& out, std::size_t r,
                            const ChowRealization& w);

/// With two blocks φ = p∘q and ψ = q∘p. With more, the two-block split is
/// iterated (first block against the rest), and φ, ψ are the composite
/// isomorphisms; the one-step pair p∘q, q∘p is then not inverse in general.
struct SplitResult {
  std::vector<Element> components;  ///< blocks[i]∘p∘blocks[i]
  std::vector<std::string> labels;
  Element q;  ///< Σ components
  Element phi;
  Element psi;
  bool identities_hold = false;  ///< φ∘ψ = p and ψ∘φ = q
  /// (p∘q)∘(q∘p) = p and (q∘p)∘(p∘q) = q; always true for two blocks.
  bool direct_identities_hold = false;
};

/// Splits an idempotent that is upper-triangular with respect to a
/// resolution of the identity by orthogonal idempotents:
/// blocks[j]∘p∘blocks[i] = 0 for j > i.
SplitResult triangular_split(const Element& p, std::span<const Element> blocks);

/// Same contract for any number ≥ 2 of blocks. With five blocks the labels
/// are the degrees 0, 1, middle, 2d-1, 2d of 1 ⊕ h₁ ⊕ M ⊕ h_{2d-1} ⊕ 1(d).
SplitResult extract_components(const Element& p, std::span<const Element> blocks, int d = 2);

/// Factorization shell: given f·g = p through an m-dimensional carrier,
/// q = g·p·f is idempotent and forward = p·f·q, backward = q·g·p are
/// mutually inverse between (Y, q) and (X, p).
struct Factorization {
  Element q;
  RatMatrix forward;
  RatMatrix backward;
  bool identities_hold = false;  ///< p·f·q·g·p = p and q·g·p·f·q = q
};

Factorization factor_idempotent(const RatMatrix& f, const RatMatrix& g, const Element& p);

/// Δ - Σ fam[i] for a mutually orthogonal family over ctx.
Element complete_decomposition(const IdempotentFamily& fam, const ContextPtr& ctx);

}  // namespace idem
