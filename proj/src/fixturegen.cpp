#include "idemcalc/fixturegen.hpp"

#include "idemcalc/linalg.hpp"
#include "idemcalc/splitter.hpp"

#include <algorithm>
#include <iterator>
#include <numeric>

namespace idem {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("SplitMix64::below: empty range");
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = next();
    if (r >= threshold) return r % bound;
  }
}

std::int64_t SplitMix64::range(std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

Rational SplitMix64::entry() {
  const long num = static_cast<long>(range(-9, 9));
  const long den = static_cast<long>(range(1, 3));
  return make_rational(num, den);
}

Rational SplitMix64::nonzero_entry() {
  long num = static_cast<long>(range(-9, 8));
  if (num >= 0) ++num;
  const long den = static_cast<long>(range(1, 3));
  return make_rational(num, den);
}

namespace {

constexpr const char* kNegativeNames[] = {"none",           "break_duality",   "break_B",      "break_D",
                                          "non_idempotent", "singular_corner", "rank_mismatch"};

}  // namespace

std::string to_string(NegativeControl n) { return kNegativeNames[static_cast<int>(n)]; }

std::optional<NegativeControl> parse_negative_control(std::string_view text) {
  for (int i = 0; i < static_cast<int>(std::size(kNegativeNames)); ++i)
    if (text == kNegativeNames[i]) return static_cast<NegativeControl>(i);
  return std::nullopt;
}

namespace {

void unsupported(const GenSpec& spec, const char* kind) {
  throw GenerationError(std::string(kind) + ": negative control " + to_string(spec.negative) + " is not supported");
}

void check_dim(std::size_t n) {
  if (n == 0) throw GenerationError("ambient dimension must be positive");
  if (n > max_ambient_dim())
    throw GenerationError("ambient dimension " + std::to_string(n) + " exceeds the cap " +
                          std::to_string(max_ambient_dim()));
}

RatMatrix random_matrix(SplitMix64& rng, std::size_t r, std::size_t c) {
  RatMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rng.entry();
  return m;
}

std::pair<RatMatrix, RatMatrix> random_invertible(SplitMix64& rng, std::size_t n) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    RatMatrix t = random_matrix(rng, n, n);
    if (auto inv = inverse(t)) return {std::move(t), std::move(*inv)};
  }
  throw GenerationError("could not sample an invertible matrix");
}

/// Reverse-coordinate permutation; symmetric and its own inverse.
RatMatrix reverse_pairing(std::size_t n) {
  RatMatrix j(n, n);
  for (std::size_t i = 0; i < n; ++i) j(i, n - 1 - i) = 1;
  return j;
}

/// Cayley transform T = (1 - A)(1 + A)⁻¹ with A = J⁻¹S, S antisymmetric,
/// which satisfies J⁻¹TᵀJ·T = 1. Returns (T, T⁻¹).
std::pair<RatMatrix, RatMatrix> orthogonal_for(SplitMix64& rng, const RatMatrix& pairing) {
  const std::size_t n = pairing.rows();
  const RatMatrix id = RatMatrix::identity(n);
  const auto jinv = inverse(pairing);
  for (int attempt = 0; attempt < 64; ++attempt) {
    RatMatrix s(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        s(i, j) = rng.entry();
        s(j, i) = -s(i, j);
      }
    const RatMatrix a = *jinv * s;
    const auto plus_inv = inverse(id + a);
    if (!plus_inv) continue;
    const RatMatrix t = (id - a) * *plus_inv;
    return {t, *inverse(t)};
  }
  throw GenerationError("could not sample a pairing-orthogonal transform");
}

std::vector<std::size_t> offsets(const std::vector<std::size_t>& sizes) {
  std::vector<std::size_t> out(sizes.size());
  std::exclusive_scan(sizes.begin(), sizes.end(), out.begin(), std::size_t{0});
  return out;
}

RatMatrix block_projection(std::size_t n, std::size_t start, std::size_t len) {
  RatMatrix e(n, n);
  for (std::size_t r = 0; r < len; ++r) e(start + r, start + r) = 1;
  return e;
}

/// Splits `total` into `parts` positive sizes.
std::vector<std::size_t> random_composition(SplitMix64& rng, std::size_t total, std::size_t parts) {
  std::vector<std::size_t> sizes(parts, 1);
  for (std::size_t extra = total - parts; extra > 0; --extra) ++sizes[rng.below(parts)];
  return sizes;
}

std::vector<std::size_t> resolve_blocks(SplitMix64& rng, const GenSpec& spec) {
  if (!spec.blocks.empty()) {
    if (std::find(spec.blocks.begin(), spec.blocks.end(), std::size_t{0}) != spec.blocks.end())
      throw GenerationError("block sizes must be positive");
    return spec.blocks;
  }
  if (spec.size == 0) throw GenerationError("family size must be positive");
  std::size_t n = spec.dim;
  if (n == 0) n = spec.size + rng.below(spec.size + 1);
  if (n < spec.size) throw GenerationError("ambient dimension is smaller than the family size");
  return random_composition(rng, n, spec.size);
}

bool hypothesis_holds(const OrthTable& t, std::size_t k) {
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = 0; j < t.size(); ++j)
      if (i != j && static_cast<long>(i) - static_cast<long>(j) < static_cast<long>(k) && !t[i][j]) return false;
  return true;
}

/// For self-dual families the mirror member is doubled too, so duality
/// still holds and idempotency is the only planted failure.
void finish_members(GeneratedFamily& out, const GenSpec& spec, bool self_dual = false) {
  out.members = out.family.members();
  if (spec.negative == NegativeControl::non_idempotent) {
    out.members[0] = make_rational(2) * out.members[0];
    if (self_dual && out.members.size() > 1) out.members.back() = make_rational(2) * out.members.back();
    out.planted.push_back({"family.idempotent", {0}});
  }
}

template <class Attempt>
GeneratedFamily with_retries(const GenSpec& spec, const char* kind, Attempt&& attempt) {
  for (std::size_t tries = 1; tries <= std::max<std::size_t>(spec.max_retries, 1); ++tries) {
    GeneratedFamily out = attempt();
    out.attempts = tries;
    if (spec.nontrivial && fully_orthogonal(orthogonality_table(out.family))) continue;
    return out;
  }
  throw GenerationError(std::string(kind) + ": retry budget of " + std::to_string(spec.max_retries) +
                        " exhausted without a non-orthogonal sample");
}

}  // namespace

GeneratedFamily gen_triangular_family(const GenSpec& spec) {
  if (spec.negative != NegativeControl::none && spec.negative != NegativeControl::non_idempotent)
    unsupported(spec, "triangular");
  if (spec.k == 0) throw GenerationError("triangular: k must be positive");
  SplitMix64 rng(spec.seed);
  const std::vector<std::size_t> sizes = resolve_blocks(rng, spec);
  const std::size_t count = sizes.size();
  const std::size_t n = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
  check_dim(n);
  const auto start = offsets(sizes);
  auto ctx = make_context(n);

  GeneratedFamily out = with_retries(spec, "triangular", [&] {
    RatMatrix low(n, n);
    for (std::size_t bi = 0; bi < count; ++bi)
      for (std::size_t bj = 0; bj + spec.k <= bi; ++bj)
        for (std::size_t r = 0; r < sizes[bi]; ++r)
          for (std::size_t c = 0; c < sizes[bj]; ++c)
            if (rng.below(2) == 0) low(start[bi] + r, start[bj] + c) = rng.entry();
    // One guaranteed entry on the band i - j = k keeps k sharp.
    if (spec.k < count) {
      const std::size_t bj = rng.below(count - spec.k);
      const std::size_t bi = bj + spec.k;
      low(start[bi] + rng.below(sizes[bi]), start[bj] + rng.below(sizes[bj])) = rng.nonzero_entry();
    }
    std::vector<Element> members;
    for (std::size_t b = 0; b < count; ++b) {
      const RatMatrix e = block_projection(n, start[b], sizes[b]);
      members.emplace_back(ctx, e + e * low);
    }
    GeneratedFamily g;
    g.family = IdempotentFamily(std::move(members));
    g.blocks = sizes;
    return g;
  });

  const OrthTable t = orthogonality_table(out.family);
  if (!hypothesis_holds(t, spec.k) || (spec.k < count && hypothesis_holds(t, spec.k + 1)))
    throw GenerationError("triangular: internal verification of the band structure failed");
  finish_members(out, spec);
  return out;
}

GeneratedFamily gen_self_dual_family(const GenSpec& spec) {
  if (spec.negative != NegativeControl::none && spec.negative != NegativeControl::break_duality &&
      spec.negative != NegativeControl::non_idempotent)
    unsupported(spec, "self-dual");
  SplitMix64 rng(spec.seed);
  std::vector<std::size_t> sizes = spec.blocks;
  if (sizes.empty()) {
    if (spec.size == 0) throw GenerationError("self-dual: family size must be positive");
    sizes.resize(spec.size);
    for (std::size_t i = 0; i < (spec.size + 1) / 2; ++i) sizes[i] = sizes[spec.size - 1 - i] = 1 + rng.below(2);
  }
  const std::size_t count = sizes.size();
  if (!std::equal(sizes.begin(), sizes.end(), sizes.rbegin()))
    throw GenerationError("self-dual: block sizes must be palindromic");
  if (spec.negative == NegativeControl::break_duality && count < 2)
    throw GenerationError("self-dual: break_duality needs at least two members");
  const std::size_t n = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
  check_dim(n);
  const auto start = offsets(sizes);
  auto ctx = make_context(reverse_pairing(n));
  const RatMatrix id = RatMatrix::identity(n);

  GeneratedFamily out = with_retries(spec, "self-dual", [&] {
    RatMatrix low(n, n);
    for (std::size_t bi = 0; bi < count; ++bi)
      for (std::size_t bj = 0; bj < bi; ++bj)
        for (std::size_t r = 0; r < sizes[bi]; ++r)
          for (std::size_t c = 0; c < sizes[bj]; ++c)
            if (rng.below(2) == 0) low(start[bi] + r, start[bj] + c) = rng.entry();
    const RatMatrix low_star = ctx->involute(low);
    std::vector<RatMatrix> mats(count);
    for (std::size_t i = 0; i < count / 2; ++i) {
      const RatMatrix e = block_projection(n, start[i], sizes[i]);
      mats[i] = e + e * low;
      mats[count - 1 - i] = ctx->involute(mats[i]);
    }
    if (count % 2 == 1) {
      const std::size_t c = count / 2;
      mats[c] = chain(id + low_star, block_projection(n, start[c], sizes[c]), id + low);
    }
    std::vector<Element> members;
    for (auto& m : mats) members.emplace_back(ctx, std::move(m));
    GeneratedFamily g;
    g.family = IdempotentFamily(std::move(members));
    g.blocks = sizes;
    return g;
  });

  if (spec.negative == NegativeControl::break_duality) {
    // The last member is the bare block projection e; e + e·E with E from
    // block 0 into the last block stays idempotent and keeps the hypothesis.
    std::vector<Element> members = out.family.members();
    RatMatrix m = members.back().mat();
    m(start.back() + rng.below(sizes.back()), rng.below(sizes.front())) += rng.nonzero_entry();
    members.back() = Element(ctx, std::move(m));
    out.family = IdempotentFamily(std::move(members));
    out.planted.push_back({"family.self_dual", {0}});
  }

  if (!hypothesis_holds(orthogonality_table(out.family), 1))
    throw GenerationError("self-dual: internal verification of the vanishing hypothesis failed");
  const auto failure = first_self_duality_failure(out.family);
  const bool want_broken = spec.negative == NegativeControl::break_duality;
  if (want_broken ? failure != std::optional<std::size_t>(0) : failure.has_value())
    throw GenerationError("self-dual: internal verification of duality failed");
  finish_members(out, spec, true);
  return out;
}

GeneratedFamily gen_planted_triviality(const GenSpec& spec) {
  if (spec.negative != NegativeControl::none) unsupported(spec, "planted-triviality");
  if (spec.k == 0) throw GenerationError("planted-triviality: k must be positive");
  SplitMix64 rng(spec.seed);
  std::vector<std::size_t> sizes = spec.blocks;
  if (sizes.empty()) {
    if (spec.size == 0) throw GenerationError("planted-triviality: family size must be positive");
    sizes.resize(spec.size);
    for (auto& z : sizes) z = 1 + rng.below(3);
    sizes.front() = std::max<std::size_t>(sizes.front(), 2);
  }
  const std::size_t count = sizes.size();
  const std::size_t n = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
  check_dim(n);
  const auto start = offsets(sizes);
  auto ctx = make_context(n);

  GeneratedFamily out = with_retries(spec, "planted-triviality", [&] {
    RatMatrix low(n, n);
    // Columns are restricted to hidden coordinates (all but the first of a
    // block), so the span of the visible coordinates is invariant.
    for (std::size_t bi = 0; bi < count; ++bi)
      for (std::size_t bj = 0; bj + spec.k <= bi; ++bj)
        for (std::size_t r = 0; r < sizes[bi]; ++r)
          for (std::size_t c = 1; c < sizes[bj]; ++c)
            if (rng.below(2) == 0) low(start[bi] + r, start[bj] + c) = rng.entry();
    std::vector<Element> members;
    for (std::size_t b = 0; b < count; ++b) {
      const RatMatrix e = block_projection(n, start[b], sizes[b]);
      members.emplace_back(ctx, e + e * low);
    }
    GeneratedFamily g;
    g.family = IdempotentFamily(std::move(members));
    g.blocks = sizes;
    return g;
  });

  RealizationLevel lv;
  lv.dim = count;
  lv.cycle_class = RatMatrix(0, count);
  for (std::size_t b = 0; b < count; ++b) {
    RatMatrix quotient(count, count);
    for (std::size_t r = 0; r < count; ++r)
      for (std::size_t c = 0; c < count; ++c) quotient(r, c) = out.family[b].mat()(start[r], start[c]);
    lv.actions.emplace(out.family.names()[b], std::move(quotient));
  }
  out.realization = ChowRealization{{std::move(lv)}};
  finish_members(out, spec);

  if (!hypothesis_holds(orthogonality_table(out.family), spec.k))
    throw GenerationError("planted-triviality: internal verification of the vanishing hypothesis failed");
  const RealizationLevel& level = out.realization->levels[0];
  for (std::size_t s = 0; s < count; ++s)
    for (std::size_t r = 0; r < count; ++r) {
      const RatMatrix& as = level.actions.at(out.family.names()[s]);
      const RatMatrix& ar = level.actions.at(out.family.names()[r]);
      if (s != r && !(as * ar).is_zero())
        throw GenerationError("planted-triviality: internal verification of the trivial actions failed");
    }
  return out;
}

namespace {

/// Rank factorization p = f·g with f the canonical image basis.
std::pair<RatMatrix, RatMatrix> rank_factorization(const RatMatrix& p) {
  const auto basis = image_basis(p);
  RatMatrix f = RatMatrix::from_columns(p.rows(), basis);
  auto g = solve_all(f, p);
  if (!g) throw GenerationError("rank factorization failed");
  return {std::move(f), std::move(*g)};
}

CertificateFactor make_factor(std::size_t degree, int d, const RatMatrix& p) {
  CertificateFactor fac;
  fac.degree = degree;
  const int j = static_cast<int>(degree);
  if (j % 2 == 1) {
    fac.carrier = "curve-h1";
    fac.twist = (j - 1) / 2;
  } else if (j == 0 || j == 2 * d) {
    fac.carrier = "point";
    fac.twist = j / 2;
  } else {
    fac.carrier = "surface";
    fac.twist = j / 2 - 1;
  }
  std::tie(fac.f, fac.g) = rank_factorization(p);
  return fac;
}

void place(RatMatrix& dst, const RatMatrix& src, std::size_t r0, std::size_t c0) {
  for (std::size_t r = 0; r < src.rows(); ++r)
    for (std::size_t c = 0; c < src.cols(); ++c) dst(r0 + r, c0 + c) = src(r, c);
}

RatMatrix injective_matrix(SplitMix64& rng, std::size_t rows, std::size_t cols) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    RatMatrix c = random_matrix(rng, rows, cols);
    if (rank(c) == cols) return c;
  }
  throw GenerationError("could not sample an injective cycle class");
}

void verify_ledger(const GeneratedLedger& g, const std::vector<PlantedFailure>& planted) {
  Report rep = verify_ck(g.ledger);
  rep.checks.push_back(verify_certificate(g.ledger, g.certificate));
  rep.checks.push_back(validate_realization(g.ledger, g.realization));
  rep.checks.push_back(check_murre_B(g.ledger, g.realization));
  rep.checks.push_back(check_murre_D(g.ledger, g.realization));
  if (!check_self_dual(g.ledger)) throw GenerationError("special ledger: internal verification of duality failed");
  for (const auto& c : rep.checks) {
    const auto hit = std::find_if(planted.begin(), planted.end(), [&](const auto& p) { return p.check == c.id; });
    if (hit == planted.end() ? !c.passed : (c.passed || c.location != hit->at))
      throw GenerationError("special ledger: internal verification failed on " + c.id + ": " + c.detail);
  }
}

}  // namespace

GeneratedLedger gen_special_ledger(const GenSpec& spec) {
  if (spec.negative != NegativeControl::none && spec.negative != NegativeControl::break_B &&
      spec.negative != NegativeControl::break_D)
    unsupported(spec, "special-ledger");
  const int d = spec.d;
  if (d < 0 || d > 4) throw GenerationError("special-ledger: d must lie in 0..4");
  if (spec.negative == NegativeControl::break_B && d == 0)
    throw GenerationError("special-ledger: break_B needs d >= 1 (every projector is inside the window at d = 0)");
  SplitMix64 rng(spec.seed);
  const std::size_t degs = static_cast<std::size_t>(2 * d + 1);

  // Homology block sizes: points at the ends, h₁ of an elliptic curve in odd
  // degrees, a small surface block in the even middle degrees. Hidden
  // (homologically trivial) sizes vanish at the ends so p_0 has rank one.
  std::vector<std::size_t> h(degs), hidden(degs);
  for (std::size_t j = 0; j <= static_cast<std::size_t>(d); ++j) {
    const std::size_t mirror = degs - 1 - j;
    std::size_t hj = 1, kj = 0;
    if (j % 2 == 1)
      hj = 2;
    else if (j != 0)
      hj = 1 + rng.below(2);
    if (j != 0) kj = rng.below(2);
    h[j] = h[mirror] = hj;
    hidden[j] = hidden[mirror] = kj;
  }
  const std::size_t nh = std::accumulate(h.begin(), h.end(), std::size_t{0});
  const std::size_t nk = std::accumulate(hidden.begin(), hidden.end(), std::size_t{0});
  const std::size_t n = nh + nk;
  check_dim(n);

  RatMatrix pairing(n, n);
  place(pairing, reverse_pairing(nh), 0, 0);
  place(pairing, reverse_pairing(nk), nh, nh);
  auto ctx = make_context(pairing);

  std::vector<int> degrees;
  for (std::size_t j = 0; j < degs; ++j) degrees.insert(degrees.end(), h[j], static_cast<int>(j));
  degrees.insert(degrees.end(), nk, kHomTrivial);

  RatMatrix u = RatMatrix::identity(nk), u_inv = RatMatrix::identity(nk);
  if (nk > 0) std::tie(u, u_inv) = orthogonal_for(rng, reverse_pairing(nk));

  const auto hstart = offsets(h);
  const auto kstart = offsets(hidden);
  std::vector<Element> projectors;
  for (std::size_t j = 0; j < degs; ++j) {
    RatMatrix p(n, n);
    place(p, block_projection(nh, hstart[j], h[j]), 0, 0);
    place(p, chain(u, block_projection(nk, kstart[j], hidden[j]), u_inv), nh, nh);
    projectors.emplace_back(ctx, std::move(p));
  }

  GeneratedLedger out;
  out.ledger = KunnethLedger(d, std::move(projectors), GradedHomology(d, std::move(degrees)));
  for (std::size_t j = 0; j < degs; ++j) out.certificate.factors.push_back(make_factor(j, d, out.ledger[j].mat()));

  // Level l of the realization is ⊕_j W_{l,j} over the window 2l <= j <= d+l,
  // transported by a random T; p_j acts as T·P_j·T⁻¹ and the class map is
  // [C 0]·T⁻¹ with C injective on W_{l,2l}.
  for (std::size_t l = 0; l <= static_cast<std::size_t>(d); ++l) {
    std::vector<std::size_t> summand(degs, 0);
    for (std::size_t j = 2 * l; j <= std::min(static_cast<std::size_t>(d) + l, degs - 1); ++j)
      summand[j] = rng.below(3);
    summand[2 * l] = std::min(summand[2 * l], h[2 * l]);
    const bool plant_b = spec.negative == NegativeControl::break_B && l == 0;
    const bool plant_d = spec.negative == NegativeControl::break_D && l == 0;
    if (plant_b) summand[static_cast<std::size_t>(d) + 1] = 1;
    if (plant_d) summand[0] = 1;

    const std::size_t dim = std::accumulate(summand.begin(), summand.end(), std::size_t{0});
    const auto sstart = offsets(summand);
    auto [t, t_inv] = random_invertible(rng, dim);

    RealizationLevel lv;
    lv.dim = dim;
    for (std::size_t j = 0; j < degs; ++j)
      lv.actions.emplace(out.ledger.names()[j], chain(t, block_projection(dim, sstart[j], summand[j]), t_inv));
    RatMatrix c = plant_d ? RatMatrix(h[0], 1) : injective_matrix(rng, h[2 * l], summand[2 * l]);
    RatMatrix padded(h[2 * l], dim);
    place(padded, c, 0, sstart[2 * l]);
    lv.cycle_class = padded * t_inv;
    out.realization.levels.push_back(std::move(lv));
  }

  if (spec.negative == NegativeControl::break_B) out.planted.push_back({"murre.B", {d + 1, 0}});
  if (spec.negative == NegativeControl::break_D) out.planted.push_back({"murre.D", {0}});
  verify_ledger(out, out.planted);
  return out;
}

GeneratedLedger curve_ledger() {
  auto ctx = make_context(reverse_pairing(4));
  const std::vector<RatMatrix> mats{block_projection(4, 0, 1), block_projection(4, 1, 2), block_projection(4, 3, 1)};
  std::vector<Element> ps;
  for (const auto& m : mats) ps.emplace_back(ctx, m);
  GeneratedLedger out;
  out.ledger = KunnethLedger(1, std::move(ps), GradedHomology(1, {0, 1, 1, 2}));
  for (std::size_t j = 0; j < 3; ++j) out.certificate.factors.push_back(make_factor(j, 1, out.ledger[j].mat()));

  // CH_0 = Q·[point] ⊕ Q·(Jacobian direction); CH_1 = Q·[C].
  RealizationLevel l0;
  l0.dim = 2;
  l0.actions = {{"p0", RatMatrix{{1, 0}, {0, 0}}}, {"p1", RatMatrix{{0, 0}, {0, 1}}}, {"p2", RatMatrix(2, 2)}};
  l0.cycle_class = RatMatrix{{1, 0}};
  RealizationLevel l1;
  l1.dim = 1;
  l1.actions = {{"p0", RatMatrix{{0}}}, {"p1", RatMatrix{{0}}}, {"p2", RatMatrix{{1}}}};
  l1.cycle_class = RatMatrix{{1}};
  out.realization.levels = {l0, l1};
  verify_ledger(out, {});
  return out;
}

GeneratedLefschetz gen_lefschetz(const GenSpec& spec) {
  if (spec.negative != NegativeControl::none && spec.negative != NegativeControl::singular_corner &&
      spec.negative != NegativeControl::rank_mismatch)
    unsupported(spec, "lefschetz");
  if (spec.surface && spec.negative != NegativeControl::none)
    throw GenerationError("lefschetz: negative controls are not combined with the surface recipe");
  SplitMix64 rng(spec.seed);
  const bool mismatch = spec.negative == NegativeControl::rank_mismatch;
  std::size_t n = spec.dim == 0 ? 4 + rng.below(5) : spec.dim;
  if (n < 3) throw GenerationError("lefschetz: ambient dimension must be at least 3");
  check_dim(n);
  const std::size_t r = 1 + rng.below(mismatch ? (n - 1) / 2 : n / 2);
  const RatMatrix pairing = reverse_pairing(n);
  auto ctx = make_context(pairing);
  auto [t, t_inv] = orthogonal_for(rng, pairing);

  std::vector<std::size_t> first(r), last(r);
  std::iota(first.begin(), first.end(), std::size_t{0});
  std::iota(last.begin(), last.end(), n - r);
  const std::vector<std::size_t> all = [&] {
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), std::size_t{0});
    return v;
  }();
  RatMatrix f = t.submatrix(all, first);
  RatMatrix g = t_inv.submatrix(first, all);
  const Element pi(ctx, f * g);
  Element pi_dual = involute(pi);
  if (mismatch) {
    // Rank r + 1 on the last coordinates: orthogonal to π_i but not its dual.
    pi_dual = Element(ctx, chain(t, block_projection(n, n - r - 1, r + 1), t_inv));
  }

  const std::size_t degree = spec.surface ? 2 : (r == 1 ? 0 : 1);
  std::optional<std::pair<RatMatrix, Rational>> surface;
  std::vector<RatMatrix> candidates;
  if (spec.surface) {
    const long m = static_cast<long>(rng.range(1, 5));
    candidates.push_back(make_rational(m) * (f * ctx->involute_from_carrier(f)));
    surface = std::make_pair(g, make_rational(m));
  } else {
    for (std::size_t i = 0; i < std::max<std::size_t>(spec.max_retries, 1); ++i) {
      RatMatrix gamma = random_matrix(rng, n, n);
      if (spec.negative == NegativeControl::singular_corner) gamma = (RatMatrix::identity(n) - pi.mat()) * gamma;
      candidates.push_back(gamma * ctx->involute_from_carrier(gamma));
      // L = Γ·Γ* has corner (gΓ)(gΓ)ᵀ, invertible once gΓ has full row rank.
      if (mismatch || spec.negative == NegativeControl::singular_corner || rank(g * gamma) == r) break;
    }
  }

  GeneratedLefschetz out{LefschetzDatum{Element(ctx, candidates.back()), degree, pi, pi_dual}, std::nullopt,
                         std::move(surface), {}};
  if (!mismatch) out.factorization = std::make_pair(std::move(f), std::move(g));

  validate_datum(out.datum);
  const long at = static_cast<long>(out.datum.degree);
  const LefschetzOutcome cert = lefschetz_certify(out.datum);
  if (spec.negative == NegativeControl::singular_corner) {
    out.planted.push_back({"lefschetz.certificate", {at}});
    out.planted.push_back({"lefschetz.factorization", {at}});
    if (cert.certified()) throw GenerationError("lefschetz: singular corner still certified");
  } else if (mismatch) {
    out.planted.push_back({"lefschetz.certificate", {at}});
    if (cert.refusal != "rank") throw GenerationError("lefschetz: rank mismatch not refused on rank");
  } else if (!cert.certified()) {
    throw GenerationError("lefschetz: generated datum is not invertible (" + cert.detail + ")");
  }
  return out;
}

}  // namespace idem
