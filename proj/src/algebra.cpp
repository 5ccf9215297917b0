#include "idemcalc/algebra.hpp"

#include "idemcalc/linalg.hpp"

#include <cstdlib>

namespace idem {

std::size_t max_ambient_dim() {
  if (const char* env = std::getenv("IDEMCALC_MAX_DIM")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return 128;
}

namespace {

void check_cap(std::size_t n) {
  if (n > max_ambient_dim())
    throw AlgebraError("ambient dimension " + std::to_string(n) + " exceeds cap " + std::to_string(max_ambient_dim()));
}

}  // namespace

InvolutiveContext::InvolutiveContext(std::size_t n)
    : dim_(n), pairing_(RatMatrix::identity(n)), pairing_inv_(RatMatrix::identity(n)) {
  check_cap(n);
}

InvolutiveContext::InvolutiveContext(RatMatrix pairing) : dim_(pairing.rows()), pairing_(std::move(pairing)) {
  check_cap(dim_);
  if (!pairing_.square()) throw AlgebraError("pairing matrix must be square");
  if (pairing_.transpose() != pairing_) throw AlgebraError("pairing matrix must be symmetric");
  auto inv = inverse(pairing_);
  if (!inv) throw AlgebraError("pairing matrix must be invertible");
  pairing_inv_ = std::move(*inv);
  trivial_ = pairing_ == RatMatrix::identity(dim_);
}

RatMatrix InvolutiveContext::involute(const RatMatrix& a) const {
  if (a.rows() != dim_ || a.cols() != dim_) throw ShapeError("involute: element has wrong size");
  if (trivial_) return a.transpose();
  return chain(pairing_inv_, a.transpose(), pairing_);
}

RatMatrix InvolutiveContext::involute_to_carrier(const RatMatrix& g) const {
  if (g.cols() != dim_) throw ShapeError("involute_to_carrier: map must start at the ambient carrier");
  return trivial_ ? g.transpose() : matmul(pairing_inv_, g.transpose());
}

RatMatrix InvolutiveContext::involute_from_carrier(const RatMatrix& f) const {
  if (f.rows() != dim_) throw ShapeError("involute_from_carrier: map must end at the ambient carrier");
  return trivial_ ? f.transpose() : matmul(f.transpose(), pairing_);
}

ContextPtr make_context(std::size_t n) { return std::make_shared<const InvolutiveContext>(n); }
ContextPtr make_context(RatMatrix pairing) { return std::make_shared<const InvolutiveContext>(std::move(pairing)); }

Element::Element(ContextPtr ctx, RatMatrix mat) : ctx_(std::move(ctx)), mat_(std::move(mat)) {
  if (!ctx_) throw AlgebraError("element without context");
  if (mat_.rows() != ctx_->dim() || mat_.cols() != ctx_->dim())
    throw ShapeError("element must be " + std::to_string(ctx_->dim()) + "x" + std::to_string(ctx_->dim()) + ", got " +
                     std::to_string(mat_.rows()) + "x" + std::to_string(mat_.cols()));
}

Element Element::identity(const ContextPtr& ctx) { return {ctx, RatMatrix::identity(ctx->dim())}; }
Element Element::zero(const ContextPtr& ctx) { return {ctx, RatMatrix(ctx->dim(), ctx->dim())}; }

bool same_context(const Element& a, const Element& b) {
  return a.context() == b.context() || *a.context() == *b.context();
}

Element compose(const Element& a, const Element& b) {
  if (!same_context(a, b)) throw AlgebraError("compose: elements live in different contexts");
  return {a.context(), matmul(a.mat(), b.mat())};
}

Element involute(const Element& a) { return {a.context(), a.context()->involute(a.mat())}; }

bool is_idempotent(const Element& a) { return matmul(a.mat(), a.mat()) == a.mat(); }

Element operator+(const Element& a, const Element& b) {
  if (!same_context(a, b)) throw AlgebraError("sum of elements from different contexts");
  return {a.context(), a.mat() + b.mat()};
}

Element operator-(const Element& a, const Element& b) {
  if (!same_context(a, b)) throw AlgebraError("difference of elements from different contexts");
  return {a.context(), a.mat() - b.mat()};
}

Element operator*(const Rational& s, const Element& a) { return {a.context(), s * a.mat()}; }

IdempotentFamily::IdempotentFamily(std::vector<Element> members, std::vector<int> labels,
                                   std::vector<std::string> names)
    : members_(std::move(members)), labels_(std::move(labels)), names_(std::move(names)) {
  if (labels_.empty())
    for (std::size_t i = 0; i < members_.size(); ++i) labels_.push_back(static_cast<int>(i));
  if (names_.empty())
    for (std::size_t i = 0; i < members_.size(); ++i) names_.push_back("m" + std::to_string(i));
  if (labels_.size() != members_.size() || names_.size() != members_.size())
    throw AlgebraError("family labels/names do not match member count");
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (i > 0 && !same_context(members_[0], members_[i]))
      throw AlgebraError("family member " + std::to_string(i) + " lives in a different context");
    if (!is_idempotent(members_[i]))
      throw AlgebraError("family member " + std::to_string(i) + " (" + names_[i] + ") is not idempotent");
  }
}

OrthTable orthogonality_table(std::span<const RatMatrix> members) {
  const std::size_t n = members.size();
  OrthTable t(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const RatMatrix prod = matmul(members[i], members[j]);
      t[i][j] = i == j ? prod == members[i] : prod.is_zero();
    }
  return t;
}

OrthTable orthogonality_table(const IdempotentFamily& fam) {
  std::vector<RatMatrix> mats;
  for (const auto& e : fam.members()) mats.push_back(e.mat());
  return orthogonality_table(mats);
}

bool fully_orthogonal(const OrthTable& table) {
  for (std::size_t i = 0; i < table.size(); ++i)
    for (std::size_t j = 0; j < table.size(); ++j)
      if (i != j && !table[i][j]) return false;
  return true;
}

std::optional<std::size_t> first_self_duality_failure(const IdempotentFamily& fam) {
  const std::size_t n = fam.size();
  for (std::size_t r = 0; r < n; ++r)
    if (involute(fam[r]) != fam[n - 1 - r]) return r;
  return std::nullopt;
}

}  // namespace idem
