#include "idemcalc/ledger.hpp"

#include "idemcalc/linalg.hpp"

#include <algorithm>

namespace idem {

KunnethLedger::KunnethLedger(int d, std::vector<Element> projectors, GradedHomology homology,
                             std::vector<std::string> names)
    : d_(d), projectors_(std::move(projectors)), names_(std::move(names)), homology_(std::move(homology)) {
  if (d < 0) throw LedgerError("ledger: negative dimension");
  if (projectors_.size() != static_cast<std::size_t>(2 * d + 1))
    throw LedgerError("ledger: expected " + std::to_string(2 * d + 1) + " projectors, got " +
                      std::to_string(projectors_.size()));
  for (std::size_t i = 1; i < projectors_.size(); ++i)
    if (!same_context(projectors_[0], projectors_[i]))
      throw LedgerError("ledger: projector " + std::to_string(i) + " lives in another context");
  if (homology_.d() != d) throw LedgerError("ledger: homology dimension parameter differs from d");
  if (homology_.total_dim() != projectors_[0].dim())
    throw LedgerError("ledger: homology has " + std::to_string(homology_.total_dim()) +
                      " coordinates, carrier has " + std::to_string(projectors_[0].dim()));
  if (names_.empty())
    for (std::size_t i = 0; i < projectors_.size(); ++i) names_.push_back("p" + std::to_string(i));
  if (names_.size() != projectors_.size()) throw LedgerError("ledger: one name per projector required");
  auto sorted = names_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw LedgerError("ledger: projector names must be distinct");
}

KunnethLedger diagonal_ledger(const ContextPtr& ctx, const GradedHomology& h) {
  std::vector<Element> ps;
  for (int i = 0; i <= 2 * h.d(); ++i) {
    RatMatrix m(ctx->dim(), ctx->dim());
    for (auto c : h.block(i)) m(c, c) = 1;
    ps.emplace_back(ctx, std::move(m));
  }
  return KunnethLedger(h.d(), std::move(ps), h);
}

namespace {

CheckResult fail(CheckResult r, std::vector<long> loc, std::string detail) {
  r.passed = false;
  r.location = std::move(loc);
  r.detail = std::move(detail);
  return r;
}

std::string idx(std::size_t i) { return std::to_string(i); }

}  // namespace

Report verify_ck(const KunnethLedger& L) {
  Report rep;
  const std::size_t n = L.size();

  CheckResult idem = make_check("ck.idempotent", "ledger");
  for (std::size_t i = 0; i < n && idem.passed; ++i)
    if (!is_idempotent(L[i])) idem = fail(idem, {long(i)}, "p" + idx(i) + " is not idempotent");
  rep.checks.push_back(idem);

  CheckResult orth = make_check("ck.orthogonal", "ledger");
  for (std::size_t i = 0; i < n && orth.passed; ++i)
    for (std::size_t j = 0; j < n && orth.passed; ++j)
      if (i != j && !compose(L[i], L[j]).is_zero())
        orth = fail(orth, {long(i), long(j)}, "p" + idx(i) + " ∘ p" + idx(j) + " is nonzero");
  rep.checks.push_back(orth);

  CheckResult sum = make_check("ck.sum", "ledger");
  Element total = Element::zero(L.context());
  for (const auto& p : L.projectors()) total = total + p;
  if (total != Element::identity(L.context())) sum = fail(sum, {}, "projectors do not sum to the diagonal");
  rep.checks.push_back(sum);

  const GradedHomology& h = L.homology();
  CheckResult inv = make_check("ck.homology_invariant", "ledger");
  for (std::size_t i = 0; i < n && inv.passed; ++i)
    if (!h.preserves_trivial(L[i].mat()))
      inv = fail(inv, {long(i)}, "p" + idx(i) + " does not preserve the homologically trivial coordinates");
  rep.checks.push_back(inv);

  CheckResult kun = make_check("ck.kunneth", "ledger");
  for (std::size_t i = 0; i < n && kun.passed; ++i)
    if (Subspace::image(h.realize(L[i].mat())) != h.degree_subspace(static_cast<int>(i)))
      kun = fail(kun, {long(i)}, "homology image of p" + idx(i) + " is not the degree-" + idx(i) + " block");
  rep.checks.push_back(kun);
  return rep;
}

std::optional<std::size_t> first_ledger_duality_failure(const KunnethLedger& L) {
  const std::size_t n = L.size();
  for (std::size_t i = 0; i < n; ++i)
    if (involute(L[i]) != L[n - 1 - i]) return i;
  return std::nullopt;
}

bool check_self_dual(const KunnethLedger& L) { return !first_ledger_duality_failure(L); }

CheckResult verify_certificate(const KunnethLedger& L, const SpecialLedgerCertificate& cert) {
  CheckResult r = make_check("certificate.special", "ledger");
  std::vector<int> seen(L.size(), 0);
  for (const auto& fac : cert.factors) {
    const long deg = static_cast<long>(fac.degree);
    if (fac.degree >= L.size()) return fail(r, {deg}, "factorization for nonexistent degree " + idx(fac.degree));
    if (++seen[fac.degree] > 1) return fail(r, {deg}, "degree " + idx(fac.degree) + " factored twice");
    const bool even = fac.degree % 2 == 0;
    const bool tag_ok = even ? (fac.carrier == "point" || fac.carrier == "surface") : fac.carrier == "curve-h1";
    if (!tag_ok) return fail(r, {deg}, "degree " + idx(fac.degree) + " cannot factor through a " + fac.carrier);
    const std::size_t n = L[fac.degree].dim();
    if (fac.f.rows() != n || fac.g.cols() != n || fac.f.cols() != fac.g.rows())
      return fail(r, {deg}, "factorization shapes do not compose to the ambient carrier");
    if (matmul(fac.f, fac.g) != L[fac.degree].mat())
      return fail(r, {deg}, "f·g differs from p" + idx(fac.degree));
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (seen[i] == 0) return fail(r, {long(i)}, "degree " + idx(i) + " has no factorization");
  return r;
}

CheckResult validate_realization(const KunnethLedger& L, const ChowRealization& W) {
  CheckResult r = make_check("realization.valid", "realization");
  const std::size_t levels = static_cast<std::size_t>(L.d()) + 1;
  if (W.level_count() != levels)
    return fail(r, {}, "expected " + idx(levels) + " levels, found " + idx(W.level_count()));
  const GradedHomology& h = L.homology();
  for (std::size_t l = 0; l < levels; ++l) {
    const RealizationLevel& lv = W.levels[l];
    const long ll = static_cast<long>(l);
    const auto h2l = h.block(static_cast<int>(2 * l));
    if (lv.cycle_class.rows() != h2l.size() || lv.cycle_class.cols() != lv.dim)
      return fail(r, {ll}, "cycle class at level " + idx(l) + " has the wrong shape");
    std::vector<const RatMatrix*> acts;
    for (const auto& name : L.names()) {
      auto it = lv.actions.find(name);
      if (it == lv.actions.end()) return fail(r, {ll}, "no action for " + name + " at level " + idx(l));
      if (it->second.rows() != lv.dim || it->second.cols() != lv.dim)
        return fail(r, {ll}, "action of " + name + " at level " + idx(l) + " has the wrong shape");
      acts.push_back(&it->second);
    }
    RatMatrix total(lv.dim, lv.dim);
    for (std::size_t i = 0; i < acts.size(); ++i) {
      const RatMatrix& a = *acts[i];
      if (matmul(a, a) != a) return fail(r, {ll, long(i)}, "action of " + L.names()[i] + " is not idempotent");
      for (std::size_t j = 0; j < acts.size(); ++j)
        if (i != j && compose(L[i], L[j]).is_zero() && !matmul(a, *acts[j]).is_zero())
          return fail(r, {ll, long(i), long(j)}, "actions of orthogonal projectors do not annihilate each other");
      const RatMatrix on_block = L[i].mat().submatrix(h2l, h2l);
      if (matmul(lv.cycle_class, a) != matmul(on_block, lv.cycle_class))
        return fail(r, {ll, long(i)}, "cycle class does not intertwine the action of " + L.names()[i]);
      total += a;
    }
    if (total != RatMatrix::identity(lv.dim))
      return fail(r, {ll}, "actions do not sum to the identity at level " + idx(l));
  }
  return r;
}

std::vector<Subspace> murre_filtration(const KunnethLedger& L, const ChowRealization& W, std::size_t l) {
  if (l > static_cast<std::size_t>(L.d()) || l >= W.level_count())
    throw std::out_of_range("murre_filtration: level " + idx(l) + " out of range");
  const std::size_t dim = W.levels[l].dim;
  std::vector<Subspace> chain{Subspace::full(dim)};
  for (std::size_t j = 2 * l; j < L.size(); ++j)
    chain.push_back(chain.back().intersect(Subspace::kernel(W.action(L.names()[j], l))));
  return chain;
}

CheckResult check_murre_B(const KunnethLedger& L, const ChowRealization& W) {
  CheckResult r = make_check("murre.B", "ledger");
  const std::size_t d = static_cast<std::size_t>(L.d());
  for (std::size_t l = 0; l <= d; ++l)
    for (std::size_t j = 0; j < L.size(); ++j) {
      if (j >= 2 * l && j <= d + l) continue;
      if (!W.action(L.names()[j], l).is_zero())
        return fail(r, {long(j), long(l)}, "p" + idx(j) + " acts nontrivially on level " + idx(l));
    }
  return r;
}

CheckResult check_murre_D(const KunnethLedger& L, const ChowRealization& W) {
  CheckResult r = make_check("murre.D", "ledger");
  for (std::size_t l = 0; l <= static_cast<std::size_t>(L.d()); ++l) {
    const auto chain = murre_filtration(L, W, l);
    if (chain[1] != Subspace::kernel(W.levels[l].cycle_class))
      return fail(r, {long(l)}, "F^1 differs from the kernel of the cycle class at level " + idx(l));
  }
  return r;
}

CheckResult compare_filtrations(const KunnethLedger& L1, const KunnethLedger& L2, const ChowRealization& W) {
  if (L1.d() != L2.d() || L1.context()->dim() != L2.context()->dim())
    throw LedgerError("compare_filtrations: ledgers live on different carriers");
  CheckResult r = make_check("murre.C", "ledgers");
  for (std::size_t l = 0; l <= static_cast<std::size_t>(L1.d()); ++l) {
    const auto a = murre_filtration(L1, W, l);
    const auto b = murre_filtration(L2, W, l);
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] != b[i]) return fail(r, {long(l), long(i)}, "F^" + idx(i) + " differs at level " + idx(l));
  }
  return r;
}

KunnethLedger product_ledger(const KunnethLedger& LX, const KunnethLedger& LC) {
  const int d = LX.d() + LC.d();
  ContextPtr ctx = make_context(kronecker(LX.context()->pairing(), LC.context()->pairing()));
  const std::size_t n = ctx->dim();
  std::vector<Element> qs;
  std::vector<std::string> names;
  for (int l = 0; l <= 2 * d; ++l) {
    RatMatrix q(n, n);
    for (int i = std::max(0, l - 2 * LC.d()); i <= std::min(l, 2 * LX.d()); ++i)
      q += kronecker(LX[i].mat(), LC[l - i].mat());
    qs.emplace_back(ctx, std::move(q));
    names.push_back("q" + std::to_string(l));
  }
  const auto& dx = LX.homology().degrees();
  const auto& dc = LC.homology().degrees();
  std::vector<int> degrees;
  degrees.reserve(n);
  for (int a : dx)
    for (int b : dc) degrees.push_back(a == kHomTrivial || b == kHomTrivial ? kHomTrivial : a + b);
  return KunnethLedger(d, std::move(qs), GradedHomology(d, std::move(degrees)), std::move(names));
}

ChowRealization product_realization(const KunnethLedger& LX, const ChowRealization& WX, const KunnethLedger& LC,
                                    const ChowRealization& WC) {
  const std::size_t dx = static_cast<std::size_t>(LX.d());
  const std::size_t dc = static_cast<std::size_t>(LC.d());
  if (WX.level_count() != dx + 1 || WC.level_count() != dc + 1)
    throw LedgerError("product_realization: realizations must have d+1 levels");
  const KunnethLedger prod = product_ledger(LX, LC);
  const std::size_t nc = LC.context()->dim();
  const GradedHomology& hx = LX.homology();
  const GradedHomology& hc = LC.homology();

  ChowRealization out;
  for (std::size_t l = 0; l <= dx + dc; ++l) {
    struct Summand {
      std::size_t a, b, offset, dim;
    };
    std::vector<Summand> parts;
    std::size_t dim = 0;
    for (std::size_t a = 0; a <= std::min(l, dx); ++a) {
      const std::size_t b = l - a;
      if (b > dc) continue;
      const std::size_t sd = WX.levels[a].dim * WC.levels[b].dim;
      parts.push_back({a, b, dim, sd});
      dim += sd;
    }

    RealizationLevel lv;
    lv.dim = dim;
    for (std::size_t m = 0; m < prod.size(); ++m) {
      RatMatrix act(dim, dim);
      for (const auto& s : parts) {
        RatMatrix blk(s.dim, s.dim);
        for (std::size_t i = 0; i < LX.size(); ++i) {
          if (m < i || m - i >= LC.size()) continue;
          blk += kronecker(WX.action(LX.names()[i], s.a), WC.action(LC.names()[m - i], s.b));
        }
        for (std::size_t r = 0; r < s.dim; ++r)
          for (std::size_t c = 0; c < s.dim; ++c) act(s.offset + r, s.offset + c) = blk(r, c);
      }
      lv.actions.emplace(prod.names()[m], std::move(act));
    }

    const auto target = prod.homology().block(static_cast<int>(2 * l));
    lv.cycle_class = RatMatrix(target.size(), dim);
    for (const auto& s : parts) {
      const auto rows_x = hx.block(static_cast<int>(2 * s.a));
      const auto rows_c = hc.block(static_cast<int>(2 * s.b));
      const RatMatrix cl = kronecker(WX.levels[s.a].cycle_class, WC.levels[s.b].cycle_class);
      for (std::size_t rx = 0; rx < rows_x.size(); ++rx)
        for (std::size_t rc = 0; rc < rows_c.size(); ++rc) {
          const std::size_t amb = rows_x[rx] * nc + rows_c[rc];
          const auto pos = std::lower_bound(target.begin(), target.end(), amb) - target.begin();
          for (std::size_t c = 0; c < s.dim; ++c)
            lv.cycle_class(pos, s.offset + c) = cl(rx * rows_c.size() + rc, c);
        }
    }
    out.levels.push_back(std::move(lv));
  }
  return out;
}

}  // namespace idem
