#pragma once

#include "idemcalc/matrix.hpp"

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace idem {

class AlgebraError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Ambient dimension cap; defaults to 128 and can be overridden through the
/// IDEMCALC_MAX_DIM environment variable.
std::size_t max_ambient_dim();

/// Ambient dimension plus a symmetric invertible pairing J. The involution
/// a ↦ J⁻¹·aᵀ·J models transposition of correspondences.
class InvolutiveContext {
 public:
  explicit InvolutiveContext(std::size_t n);
  explicit InvolutiveContext(RatMatrix pairing);

  std::size_t dim() const noexcept { return dim_; }
  const RatMatrix& pairing() const noexcept { return pairing_; }
  const RatMatrix& pairing_inverse() const noexcept { return pairing_inv_; }
  bool trivial_pairing() const noexcept { return trivial_; }

  RatMatrix involute(const RatMatrix& a) const;
  /// Involution of a map into a small carrier with the identity pairing: g ↦ J⁻¹·gᵀ.
  RatMatrix involute_to_carrier(const RatMatrix& g) const;
  /// Involution of a map out of a small carrier: f ↦ fᵀ·J.
  RatMatrix involute_from_carrier(const RatMatrix& f) const;

  friend bool operator==(const InvolutiveContext& a, const InvolutiveContext& b) {
    return a.dim_ == b.dim_ && a.pairing_ == b.pairing_;
  }

 private:
  std::size_t dim_;
  RatMatrix pairing_;
  RatMatrix pairing_inv_;
  bool trivial_ = true;
};

using ContextPtr = std::shared_ptr<const InvolutiveContext>;

ContextPtr make_context(std::size_t n);
ContextPtr make_context(RatMatrix pairing);

/// A correspondence: a square matrix over a shared context.
class Element {
 public:
  Element(ContextPtr ctx, RatMatrix mat);

  static Element identity(const ContextPtr& ctx);
  static Element zero(const ContextPtr& ctx);

  const ContextPtr& context() const noexcept { return ctx_; }
  const RatMatrix& mat() const noexcept { return mat_; }
  std::size_t dim() const noexcept { return mat_.rows(); }
  bool is_zero() const { return mat_.is_zero(); }

  friend bool operator==(const Element& a, const Element& b) { return a.mat_ == b.mat_; }

 private:
  ContextPtr ctx_;
  RatMatrix mat_;
};

bool same_context(const Element& a, const Element& b);

/// compose(a, b) applies b first, then a: its matrix is mat(a)·mat(b).
Element compose(const Element& a, const Element& b);
Element involute(const Element& a);
bool is_idempotent(const Element& a);

Element operator+(const Element& a, const Element& b);
Element operator-(const Element& a, const Element& b);
Element operator*(const Rational& s, const Element& a);

/// Ordered idempotents over one context, each with a degree label and a
/// name (used to look up realization actions).
class IdempotentFamily {
 public:
  IdempotentFamily() = default;
  /// Throws AlgebraError naming the first non-idempotent member.
  IdempotentFamily(std::vector<Element> members, std::vector<int> labels = {}, std::vector<std::string> names = {});

  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  const Element& operator[](std::size_t i) const { return members_[i]; }
  const std::vector<Element>& members() const noexcept { return members_; }
  const std::vector<int>& labels() const noexcept { return labels_; }
  const std::vector<std::string>& names() const noexcept { return names_; }

  friend bool operator==(const IdempotentFamily& a, const IdempotentFamily& b) {
    return a.members_ == b.members_ && a.labels_ == b.labels_ && a.names_ == b.names_;
  }

 private:
  std::vector<Element> members_;
  std::vector<int> labels_;
  std::vector<std::string> names_;
};

/// Entry (i, j), i != j, is true iff fam[i]∘fam[j] = 0; the diagonal
/// reports idempotency.
using OrthTable = std::vector<std::vector<bool>>;
OrthTable orthogonality_table(const IdempotentFamily& fam);
OrthTable orthogonality_table(std::span<const RatMatrix> members);
bool fully_orthogonal(const OrthTable& table);

/// First index r with involute(fam[r]) != fam[n-r], if any.
std::optional<std::size_t> first_self_duality_failure(const IdempotentFamily& fam);

}  // namespace idem
