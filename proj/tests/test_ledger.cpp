#include "idemcalc/fixturegen.hpp"
#include "idemcalc/ledger.hpp"

#include "support.hpp"

using namespace idem;
using testing::q;

namespace {

RatMatrix reverse(std::size_t n) {
  RatMatrix j(n, n);
  for (std::size_t i = 0; i < n; ++i) j(i, n - 1 - i) = 1;
  return j;
}

std::vector<std::size_t> block_dims(const KunnethLedger& L) {
  std::vector<std::size_t> out;
  for (int i = 0; i <= 2 * L.d(); ++i) out.push_back(L.homology().block(i).size());
  return out;
}

KunnethLedger point_ledger() {
  auto ctx = make_context(1);
  return KunnethLedger(0, {Element::identity(ctx)}, GradedHomology(0, {0}));
}

ChowRealization point_realization() {
  RealizationLevel lv;
  lv.dim = 1;
  lv.actions.emplace("p0", RatMatrix{{1}});
  lv.cycle_class = RatMatrix{{1}};
  return ChowRealization{{lv}};
}

GenSpec ledger_spec(std::uint64_t seed, int d) {
  GenSpec s;
  s.seed = seed;
  s.d = d;
  return s;
}

}  // namespace

TEST_CASE("verify_ck on diagonal models") {
  auto ctx = make_context(5);
  const KunnethLedger L = diagonal_ledger(ctx, GradedHomology(2, {0, 1, 1, 2, 4}));
  CHECK(verify_ck(L).passed());
  CHECK(verify_ck(curve_ledger().ledger).passed());

  std::vector<Element> ps = L.projectors();
  ps[1] = make_rational(2) * ps[1];
  const Report bad = verify_ck(KunnethLedger(2, ps, L.homology()));
  CHECK_FALSE(bad.passed());
  REQUIRE(bad.find("ck.idempotent"));
  CHECK(bad.find("ck.idempotent")->location == std::vector<long>{1});
}

TEST_CASE("verify_ck names the first failing condition") {
  auto ctx = make_context(3);
  const GradedHomology h(1, {0, 1, 2});
  const RatMatrix e0{{1, 0, 0}, {0, 0, 0}, {0, 0, 0}};
  const RatMatrix e1{{0, 0, 0}, {0, 1, 0}, {0, 0, 0}};
  const RatMatrix e2{{0, 0, 0}, {0, 0, 0}, {0, 0, 1}};
  // p0 and p1 idempotent but p1∘p0 != 0.
  const RatMatrix p1{{0, 0, 0}, {1, 1, 0}, {0, 0, 0}};
  const Report r = verify_ck(KunnethLedger(1, {Element(ctx, e0), Element(ctx, p1), Element(ctx, e2)}, h));
  CHECK(r.find("ck.idempotent")->passed);
  CHECK(r.find("ck.orthogonal")->location == std::vector<long>{1, 0});
  // Swapped images: orthogonal and summing to one, but not Künneth.
  const Report k = verify_ck(KunnethLedger(1, {Element(ctx, e1), Element(ctx, e0), Element(ctx, e2)}, h));
  CHECK(k.find("ck.sum")->passed);
  CHECK(k.find("ck.kunneth")->location == std::vector<long>{0});
}

TEST_CASE("homology realization ignores trivial coordinates") {
  auto ctx = make_context(3);
  const GradedHomology h(0, {0, kHomTrivial, kHomTrivial});
  const KunnethLedger ok(0, {Element::identity(ctx)}, h);
  CHECK(verify_ck(ok).passed());
  CHECK(h.realize(RatMatrix::identity(3)) == RatMatrix{{1}});
  CHECK(h.homology_dim() == 1);
  CHECK_FALSE(h.preserves_trivial(RatMatrix{{1, 1, 0}, {0, 1, 0}, {0, 0, 1}}));
  CHECK_THROWS_AS(GradedHomology(1, {0, 3}), std::invalid_argument);
}

TEST_CASE("check_self_dual examples") {
  const GradedHomology h(1, {0, 1, 1, 2});
  CHECK(check_self_dual(diagonal_ledger(make_context(reverse(4)), h)));
  // Plain transpose with dim H_0 != dim H_2.
  const GradedHomology lopsided(1, {0, 0, 1, 2});
  const KunnethLedger asym = diagonal_ledger(make_context(4), lopsided);
  CHECK_FALSE(check_self_dual(asym));
  CHECK(first_ledger_duality_failure(asym) == std::optional<std::size_t>(0));
  CHECK(check_self_dual(diagonal_ledger(make_context(3), GradedHomology(2, {2, 2, 2}))));
}

TEST_CASE("murre_filtration on the curve model") {
  const GeneratedLedger c = curve_ledger();
  const auto f0 = murre_filtration(c.ledger, c.realization, 0);
  REQUIRE(f0.size() == 4);
  CHECK(f0[0] == Subspace::full(2));
  CHECK(f0[1] == Subspace::span(2, {Vector{0, 1}}));
  CHECK(f0[2].dim() == 0);
  CHECK(f0[3].dim() == 0);
  const auto f1 = murre_filtration(c.ledger, c.realization, 1);
  CHECK(f1.size() == 2);
  CHECK(f1[1].dim() == 0);
  CHECK_THROWS_AS(murre_filtration(c.ledger, c.realization, 2), std::out_of_range);

  ChowRealization zero = c.realization;
  for (auto& [name, act] : zero.levels[0].actions) act = RatMatrix(2, 2);
  for (const auto& f : murre_filtration(c.ledger, zero, 0)) CHECK(f == Subspace::full(2));
}

TEST_CASE("Murre B and D on the curve model and its controls") {
  const GeneratedLedger c = curve_ledger();
  CHECK(validate_realization(c.ledger, c.realization).passed);
  CHECK(check_murre_B(c.ledger, c.realization).passed);
  CHECK(check_murre_D(c.ledger, c.realization).passed);

  ChowRealization bad_b = c.realization;
  bad_b.levels[0].actions["p2"] = RatMatrix{{0, 0}, {0, 1}};
  bad_b.levels[0].actions["p1"] = RatMatrix(2, 2);
  const CheckResult b = check_murre_B(c.ledger, bad_b);
  CHECK_FALSE(b.passed);
  CHECK(b.location == std::vector<long>{2, 0});

  ChowRealization bad_d = c.realization;
  bad_d.levels[0].cycle_class = RatMatrix{{0, 0}};
  const CheckResult dres = check_murre_D(c.ledger, bad_d);
  CHECK_FALSE(dres.passed);
  CHECK(dres.location == std::vector<long>{0});
}

TEST_CASE("Murre D passes when the class map is injective and p_2l acts as one") {
  const KunnethLedger P = point_ledger();
  CHECK(check_murre_D(P, point_realization()).passed);
  CHECK(murre_filtration(P, point_realization(), 0)[1].dim() == 0);
}

TEST_CASE("validate_realization catches broken intertwining") {
  const GeneratedLedger c = curve_ledger();
  ChowRealization w = c.realization;
  w.levels[0].cycle_class = RatMatrix{{1, 1}};
  const CheckResult r = validate_realization(c.ledger, w);
  CHECK_FALSE(r.passed);
  w = c.realization;
  w.levels.pop_back();
  CHECK_FALSE(validate_realization(c.ledger, w).passed);
}

TEST_CASE("compare_filtrations") {
  const GeneratedLedger g = gen_special_ledger(ledger_spec(5, 2));
  CHECK(compare_filtrations(g.ledger, g.ledger, g.realization).passed);

  // Conjugate the hidden part only: the realization sees the same actions.
  const std::size_t n = g.ledger.context()->dim();
  const auto vis = g.ledger.homology().visible();
  RatMatrix v = RatMatrix::identity(n), v_inv = RatMatrix::identity(n);
  if (vis.size() + 1 < n) {
    v(n - 1, n - 2) = 3;
    v_inv(n - 1, n - 2) = -3;
  }
  std::vector<Element> conj;
  std::vector<std::string> names;
  ChowRealization w = g.realization;
  for (std::size_t i = 0; i < g.ledger.size(); ++i) {
    conj.emplace_back(g.ledger.context(), chain(v, g.ledger[i].mat(), v_inv));
    names.push_back("r" + std::to_string(i));
    for (auto& lv : w.levels) lv.actions.emplace(names.back(), lv.actions.at(g.ledger.names()[i]));
  }
  const KunnethLedger L2(g.ledger.d(), conj, g.ledger.homology(), names);
  CHECK(verify_ck(L2).passed());
  CHECK(compare_filtrations(g.ledger, L2, w).passed);

  const GeneratedLedger c = curve_ledger();
  const auto& ps = c.ledger.projectors();
  const KunnethLedger permuted(1, {ps[2], ps[1], ps[0]}, c.ledger.homology(), {"p2", "p1", "p0"});
  const CheckResult cmp = compare_filtrations(c.ledger, permuted, c.realization);
  CHECK_FALSE(cmp.passed);
  CHECK_THROWS_AS(compare_filtrations(c.ledger, g.ledger, c.realization), LedgerError);
}

TEST_CASE("product with the point ledger is the identity") {
  const GeneratedLedger c = curve_ledger();
  const KunnethLedger prod = product_ledger(point_ledger(), c.ledger);
  REQUIRE(prod.size() == c.ledger.size());
  for (std::size_t i = 0; i < prod.size(); ++i) CHECK(prod[i] == c.ledger[i]);
  CHECK(prod.homology() == c.ledger.homology());
}

TEST_CASE("curve times curve has convolved block dimensions") {
  const GeneratedLedger c = curve_ledger();
  const KunnethLedger prod = product_ledger(c.ledger, c.ledger);
  CHECK(prod.d() == 2);
  CHECK(block_dims(prod) == std::vector<std::size_t>{1, 4, 6, 4, 1});
  CHECK(verify_ck(prod).passed());
  CHECK(check_self_dual(prod));
  const ChowRealization w = product_realization(c.ledger, c.realization, c.ledger, c.realization);
  CHECK(validate_realization(prod, w).passed);
  CHECK(check_murre_B(prod, w).passed);
  CHECK(check_murre_D(prod, w).passed);
}

TEST_CASE("generated special ledgers satisfy B and D, and so do their products") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const GeneratedLedger x = gen_special_ledger(ledger_spec(seed, static_cast<int>(seed % 4)));
    const GeneratedLedger y = gen_special_ledger(ledger_spec(seed + 100, 1));
    CHECK(verify_ck(x.ledger).passed());
    CHECK(verify_certificate(x.ledger, x.certificate).passed);
    CHECK(check_murre_B(x.ledger, x.realization).passed);
    CHECK(check_murre_D(x.ledger, x.realization).passed);

    const KunnethLedger p = product_ledger(x.ledger, y.ledger);
    const ChowRealization w = product_realization(x.ledger, x.realization, y.ledger, y.realization);
    CHECK(verify_ck(p).passed());
    CHECK(validate_realization(p, w).passed);
    CHECK(check_murre_B(p, w).passed);
    CHECK(check_murre_D(p, w).passed);
    CHECK(check_self_dual(p));
  }
}

TEST_CASE("filtrations descend, stabilize and embed through the class map") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const GeneratedLedger g = gen_special_ledger(ledger_spec(seed, 3));
    for (std::size_t l = 0; l <= 3; ++l) {
      const auto f = murre_filtration(g.ledger, g.realization, l);
      for (std::size_t i = 1; i < f.size(); ++i) CHECK(f[i - 1].contains(f[i]));
      CHECK(f.back().dim() == 0);
      CHECK(rank(g.realization.levels[l].cycle_class) == f[0].dim() - f[1].dim());
    }
  }
}

TEST_CASE("product filtration is the convolution of the factor filtrations") {
  const GeneratedLedger x = gen_special_ledger(ledger_spec(7, 2));
  const GeneratedLedger y = gen_special_ledger(ledger_spec(8, 1));
  const KunnethLedger p = product_ledger(x.ledger, y.ledger);
  const ChowRealization w = product_realization(x.ledger, x.realization, y.ledger, y.realization);
  for (std::size_t l = 0; l <= 3; ++l) {
    const auto fp = murre_filtration(p, w, l);
    const std::size_t dim = w.levels[l].dim;
    for (std::size_t i = 0; i < fp.size(); ++i) {
      // ⊕_{a+b=l} Σ_{s+t=i} F^s_a ⊗ F^t_b, laid out in the product's summand order.
      Subspace predicted(dim);
      std::size_t offset = 0;
      for (std::size_t a = 0; a <= std::min<std::size_t>(l, 2); ++a) {
        const std::size_t b = l - a;
        if (b > 1) continue;
        const auto fx = murre_filtration(x.ledger, x.realization, a);
        const auto fy = murre_filtration(y.ledger, y.realization, b);
        const std::size_t dy = y.realization.levels[b].dim;
        for (std::size_t s = 0; s <= i; ++s) {
          const Subspace& sx = fx[std::min(s, fx.size() - 1)];
          const Subspace& sy = fy[std::min(i - s, fy.size() - 1)];
          std::vector<Vector> vecs;
          for (const auto& u : sx.basis())
            for (const auto& v : sy.basis()) {
              Vector e(dim);
              for (std::size_t iu = 0; iu < u.size(); ++iu)
                for (std::size_t iv = 0; iv < v.size(); ++iv) e[offset + iu * dy + iv] = u[iu] * v[iv];
              vecs.push_back(std::move(e));
            }
          predicted = predicted.sum(Subspace::span(dim, vecs));
        }
        offset += x.realization.levels[a].dim * dy;
      }
      CHECK(fp[i] == predicted);
    }
  }
}

TEST_CASE("certificates are checked against the ledger") {
  GeneratedLedger c = curve_ledger();
  CHECK(verify_certificate(c.ledger, c.certificate).passed);
  SpecialLedgerCertificate wrong_tag = c.certificate;
  wrong_tag.factors[1].carrier = "surface";
  CHECK(verify_certificate(c.ledger, wrong_tag).location == std::vector<long>{1});
  SpecialLedgerCertificate missing = c.certificate;
  missing.factors.pop_back();
  CHECK_FALSE(verify_certificate(c.ledger, missing).passed);
  SpecialLedgerCertificate off = c.certificate;
  off.factors[0].f = make_rational(2) * off.factors[0].f;
  CHECK(verify_certificate(c.ledger, off).location == std::vector<long>{0});
}
