#include "idemcalc/fixturegen.hpp"
#include "idemcalc/lefschetz.hpp"

#include "oracle/frac2.hpp"
#include "support.hpp"

using namespace idem;
using testing::q;

namespace {

const RatMatrix kSwap{{0, 1}, {1, 0}};

LefschetzDatum swap_datum(const Rational& scale) {
  auto ctx = make_context(kSwap);
  return {Element(ctx, scale * kSwap), 0, Element(ctx, RatMatrix{{1, 0}, {0, 0}}),
          Element(ctx, RatMatrix{{0, 0}, {0, 1}})};
}

RatMatrix reverse(std::size_t n) {
  RatMatrix j(n, n);
  for (std::size_t i = 0; i < n; ++i) j(i, n - 1 - i) = 1;
  return j;
}

}  // namespace

TEST_CASE("certify a block exchange") {
  const LefschetzDatum D = swap_datum(1);
  const LefschetzOutcome out = lefschetz_certify(D);
  REQUIRE(out.certified());
  CHECK(out.m.mat() == RatMatrix{{0, 1}, {0, 0}});
  CHECK(out.beta->mat() == RatMatrix{{0, 0}, {1, 0}});
  CHECK(verify_inverse(D, *out.beta));
}

TEST_CASE("certify refuses the zero morphism and rank mismatches") {
  LefschetzDatum D = swap_datum(0);
  const LefschetzOutcome zero = lefschetz_certify(D);
  CHECK_FALSE(zero.certified());
  CHECK(zero.refusal == "right");

  auto ctx = make_context(3);
  const LefschetzDatum R{Element::identity(ctx), 1, Element(ctx, RatMatrix{{1, 0, 0}, {0, 0, 0}, {0, 0, 0}}),
                         Element(ctx, RatMatrix{{0, 0, 0}, {0, 1, 0}, {0, 0, 1}})};
  CHECK(lefschetz_certify(R).refusal == "rank");
}

TEST_CASE("datum invariants are enforced") {
  LefschetzDatum D = swap_datum(1);
  D.pi_dual = D.pi;
  CHECK_THROWS_AS(lefschetz_certify(D), LefschetzError);
}

TEST_CASE("point case: corner is a scalar") {
  const RatMatrix f{{1}, {0}}, g{{1, 0}};
  for (long s : {1L, 3L, -2L}) {
    const LefschetzDatum D = swap_datum(s);
    const Element beta = inverse_via_factorization(D, f, g);
    CHECK(beta.mat() == RatMatrix{{0, 0}, {q(1, s), 0}});
    CHECK(verify_inverse(D, beta));
  }
  CHECK_THROWS_AS(inverse_via_factorization(swap_datum(0), f, g), LefschetzError);
}

TEST_CASE("curve case: a 2x2 corner inverted against the oracle") {
  auto ctx = make_context(reverse(4));
  RatMatrix l(4, 4);
  // Corner g·L·g* reads L[0,3], L[0,2], L[1,3], L[1,2].
  l(0, 3) = 2;
  l(0, 2) = 1;
  l(1, 3) = 1;
  l(1, 2) = 1;
  const RatMatrix pi{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}};
  const LefschetzDatum D{Element(ctx, l), 1, Element(ctx, pi), involute(Element(ctx, pi))};
  const RatMatrix f{{1, 0}, {0, 1}, {0, 0}, {0, 0}};
  const RatMatrix g = f.transpose();
  const Element beta = inverse_via_factorization(D, f, g);
  CHECK(verify_inverse(D, beta));

  using oracle::Frac;
  const oracle::M2 alpha = oracle::inverse({{{Frac(2), Frac(1)}, {Frac(1), Frac(1)}}});
  // β = π_dual·g*·α·g·π_i; g* = J·gᵀ puts α's rows on coordinates 3 and 2.
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c)
      CHECK(beta.mat()(3 - r, c) == make_rational(alpha[r][c].num, alpha[r][c].den));
  CHECK(lefschetz_certify(D).beta == beta);
}

TEST_CASE("factorization preconditions") {
  const LefschetzDatum D = swap_datum(1);
  CHECK_THROWS_AS(inverse_via_factorization(D, RatMatrix{{2}, {0}}, RatMatrix{{1, 0}}), LefschetzError);
  CHECK_THROWS_AS(inverse_via_factorization(D, RatMatrix{{1, 0}}, RatMatrix{{1}, {0}}), LefschetzError);
}

TEST_CASE("surface case") {
  const RatMatrix gf{{1, 0}};
  const Element one = surface_case_inverse(swap_datum(1), gf, 1);
  CHECK(one.mat() == RatMatrix{{0, 0}, {1, 0}});
  const Element five = surface_case_inverse(swap_datum(5), gf, 5);
  CHECK(five.mat() == RatMatrix{{0, 0}, {q(1, 5), 0}});
  CHECK_THROWS_AS(surface_case_inverse(swap_datum(5), gf, 1), LefschetzError);
  CHECK_THROWS_AS(surface_case_inverse(swap_datum(1), gf, 0), LefschetzError);
}

TEST_CASE("generated data: the recipes agree with the solver") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    GenSpec spec;
    spec.seed = seed;
    spec.surface = seed % 4 == 3;
    const GeneratedLefschetz g = gen_lefschetz(spec);
    const LefschetzOutcome cert = lefschetz_certify(g.datum);
    REQUIRE(cert.certified());
    CHECK(verify_inverse(g.datum, *cert.beta));
    CHECK(rank(g.datum.pi.mat()) == rank(g.datum.pi_dual.mat()));
    REQUIRE(g.factorization);
    const Element viaf = inverse_via_factorization(g.datum, g.factorization->first, g.factorization->second);
    CHECK(compose(g.datum.pi_dual, compose(viaf, g.datum.pi)) ==
          compose(g.datum.pi_dual, compose(*cert.beta, g.datum.pi)));
    if (g.surface) {
      const Element s = surface_case_inverse(g.datum, g.surface->first, g.surface->second);
      CHECK(s == viaf);
    }
  }
}

TEST_CASE("generated negative controls") {
  GenSpec spec;
  spec.seed = 9;
  spec.negative = NegativeControl::singular_corner;
  const GeneratedLefschetz sc = gen_lefschetz(spec);
  CHECK_FALSE(lefschetz_certify(sc.datum).certified());
  CHECK_THROWS_AS(inverse_via_factorization(sc.datum, sc.factorization->first, sc.factorization->second),
                  LefschetzError);
  spec.negative = NegativeControl::rank_mismatch;
  const GeneratedLefschetz rm = gen_lefschetz(spec);
  CHECK(lefschetz_certify(rm.datum).refusal == "rank");
  CHECK_FALSE(rm.factorization);
}

TEST_CASE("corner vanishing claims") {
  auto ctx = make_context(2);
  const Element a(ctx, RatMatrix{{1, 0}, {0, 0}}), b(ctx, RatMatrix{{0, 0}, {0, 1}});
  const std::vector<Element> diag{Element(ctx, RatMatrix{{1, 0}, {0, 2}})};
  CHECK(corner_vanishes(a, b, diag));
  const std::vector<Element> mixing{Element(ctx, kSwap)};
  CHECK_FALSE(corner_vanishes(a, b, mixing));
}
