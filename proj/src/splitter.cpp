#include "idemcalc/splitter.hpp"

#include "idemcalc/linalg.hpp"

namespace idem {

HypothesisError::HypothesisError(std::size_t i_, std::size_t j_, std::size_t k_)
    : std::invalid_argument("hypothesis violated: member " + std::to_string(i_) + " composed with member " +
                            std::to_string(j_) + " is nonzero (k = " + std::to_string(k_) + ")"),
      i(i_),
      j(j_),
      k(k_) {}

SplitError::SplitError(std::string condition_, const std::string& detail)
    : std::invalid_argument(condition_ + ": " + detail), condition(std::move(condition_)) {}

namespace {

bool required_zero(std::size_t i, std::size_t j, std::size_t k) {
  return i != j && static_cast<long>(i) - static_cast<long>(j) < static_cast<long>(k);
}

void check_hypothesis(std::span<const RatMatrix> mats, std::size_t k) {
  for (std::size_t i = 0; i < mats.size(); ++i)
    for (std::size_t j = 0; j < mats.size(); ++j)
      if (required_zero(i, j, k) && !matmul(mats[i], mats[j]).is_zero()) throw HypothesisError(i, j, k);
}

void check_hypothesis(const OrthTable& table, std::size_t k) {
  for (std::size_t i = 0; i < table.size(); ++i)
    for (std::size_t j = 0; j < table.size(); ++j)
      if (required_zero(i, j, k) && !table[i][j]) throw HypothesisError(i, j, k);
}

std::vector<RatMatrix> matrices(const IdempotentFamily& fam) {
  std::vector<RatMatrix> out;
  out.reserve(fam.size());
  for (const auto& e : fam.members()) out.push_back(e.mat());
  return out;
}

IdempotentFamily rewrap(const IdempotentFamily& like, std::vector<RatMatrix> mats, const std::string& suffix) {
  std::vector<Element> members;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < mats.size(); ++i) {
    members.emplace_back(like[i].context(), std::move(mats[i]));
    names.push_back(like.names()[i] + suffix);
  }
  return IdempotentFamily(std::move(members), like.labels(), std::move(names));
}

}  // namespace

std::vector<RatMatrix> gs_formula(std::span<const RatMatrix> members) {
  const std::size_t count = members.size();
  if (count == 0) return {};
  const std::size_t n = members[0].rows();
  const RatMatrix id = RatMatrix::identity(n);
  const Rational half = make_rational(1, 2);

  std::vector<RatMatrix> factor;
  factor.reserve(count);
  for (const auto& m : members) factor.push_back(id - half * m);

  // right[i] = F_{i-1}···F_0, left[i] = F_{count-1}···F_{i+1}.
  std::vector<RatMatrix> right(count), left(count);
  right[0] = id;
  for (std::size_t i = 1; i < count; ++i) right[i] = matmul(factor[i - 1], right[i - 1]);
  left[count - 1] = id;
  for (std::size_t i = count - 1; i-- > 0;) left[i] = matmul(left[i + 1], factor[i + 1]);

  std::vector<RatMatrix> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(chain(left[i], members[i], right[i]));
  return out;
}

IdempotentFamily gram_schmidt_pass(const IdempotentFamily& fam, std::size_t k) {
  if (k == 0) throw std::invalid_argument("gram_schmidt_pass: k must be positive");
  const auto mats = matrices(fam);
  check_hypothesis(mats, k);
  return rewrap(fam, gs_formula(mats), "'");
}

IsomorphismWitness isomorphism_witness(const Element& pi, const Element& p) {
  IsomorphismWitness w{compose(pi, p), compose(p, pi), false};
  w.valid = compose(w.v, w.u) == p && compose(w.u, w.v) == pi;
  return w;
}

bool GSReport::witnesses_valid() const {
  for (const auto& pass : pass_witnesses)
    for (const auto& w : pass)
      if (!w.valid) return false;
  for (const auto& w : witnesses)
    if (!w.valid) return false;
  return true;
}

GSReport orthonormalize(const IdempotentFamily& fam, std::optional<std::size_t> max_passes) {
  GSReport rep;
  rep.input = fam;
  const std::size_t cap = max_passes.value_or(fam.size() > 0 ? fam.size() - 1 : 0);

  std::vector<RatMatrix> current = matrices(fam);
  rep.stages.push_back(fam);
  rep.tables.push_back(orthogonality_table(current));
  // The theorem's hypothesis: fam[i]∘fam[j] = 0 for all i < j.
  check_hypothesis(rep.tables.back(), 1);

  for (std::size_t t = 0; t < cap && !fully_orthogonal(rep.tables.back()); ++t) {
    check_hypothesis(rep.tables.back(), t + 1);
    std::vector<RatMatrix> next = gs_formula(current);
    IdempotentFamily stage = rewrap(fam, next, t + 1 == cap ? ".gs" : "'" + std::to_string(t + 1));

    std::vector<IsomorphismWitness> ws;
    for (std::size_t r = 0; r < fam.size(); ++r) ws.push_back(isomorphism_witness(rep.stages.back()[r], stage[r]));
    rep.pass_witnesses.push_back(std::move(ws));

    rep.tables.push_back(orthogonality_table(next));
    rep.stages.push_back(std::move(stage));
    current = std::move(next);
  }
  rep.passes_run = rep.stages.size() - 1;

  if (rep.passes_run == 0) {
    rep.output = fam;
  } else {
    rep.output = rewrap(fam, current, ".gs");
    rep.stages.back() = rep.output;
  }

  for (std::size_t r = 0; r < fam.size(); ++r) {
    Element u = fam[r];
    Element v = fam[r];
    for (std::size_t t = 1; t < rep.stages.size(); ++t) {
      u = compose(u, rep.stages[t][r]);
      v = compose(rep.stages[t][r], v);
    }
    IsomorphismWitness w{u, v, false};
    w.valid = compose(w.v, w.u) == rep.output[r] && compose(w.u, w.v) == fam[r];
    rep.witnesses.push_back(std::move(w));
  }
  return rep;
}

ChowRealization extend_with_outputs(const ChowRealization& w, const GSReport& report) {
  ChowRealization out = w;
  if (report.passes_run == 0) return out;
  for (std::size_t l = 0; l < out.levels.size(); ++l) {
    std::vector<RatMatrix> images;
    for (const auto& name : report.input.names()) images.push_back(w.action(name, l));
    for (std::size_t t = 0; t < report.passes_run; ++t) images = gs_formula(images);
    for (std::size_t r = 0; r < images.size(); ++r)
      out.levels[l].actions[report.output.names()[r]] = std::move(images[r]);
  }
  return out;
}

namespace {

template <class Pred>
bool per_level(const IdempotentFamily& in, const IdempotentFamily& out, std::size_t r, const ChowRealization& w,
               Pred&& pred) {
  if (r >= in.size() || r >= out.size()) throw std::out_of_range("action_agreement: index out of range");
  for (std::size_t l = 0; l < w.levels.size(); ++l)
    if (!pred(w.action(in.names()[r], l), w.action(out.names()[r], l))) return false;
  return true;
}

}  // namespace

bool action_agreement(const IdempotentFamily& in, const IdempotentFamily& out, std::size_t r,
                      const ChowRealization& w) {
  return per_level(in, out, r, w, [](const RatMatrix& a, const RatMatrix& b) { return a == b; });
}

bool action_image_agreement(const IdempotentFamily& in, const IdempotentFamily& out, std::size_t r,
                            const ChowRealization& w) {
  return per_level(in, out, r, w,
                   [](const RatMatrix& a, const RatMatrix& b) { return Subspace::image(a) == Subspace::image(b); });
}

namespace {

void check_resolution(std::span<const Element> blocks, const Element& p) {
  if (blocks.empty()) throw SplitError("blocks.sum", "no blocks supplied");
  Element total = Element::zero(p.context());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (!same_context(blocks[i], p)) throw SplitError("blocks.context", "block " + std::to_string(i));
    if (!is_idempotent(blocks[i])) throw SplitError("blocks.idempotent", "block " + std::to_string(i));
    for (std::size_t j = 0; j < blocks.size(); ++j)
      if (i != j && !compose(blocks[i], blocks[j]).is_zero())
        throw SplitError("blocks.orthogonal", "blocks " + std::to_string(i) + " and " + std::to_string(j));
    total = total + blocks[i];
  }
  if (total != Element::identity(p.context())) throw SplitError("blocks.sum", "blocks do not sum to the identity");
}

/// The two-block lemma applied along blocks[0] | rest, then recursively
/// inside the rest: with q2 = p_A + p_R and (φ_R, ψ_R) for p_R,
/// φ = p∘q2∘(p_A + φ_R) and ψ = (p_A + ψ_R)∘q2∘p.
std::pair<Element, Element> iterated_witnesses(const Element& p, std::span<const Element> blocks) {
  if (blocks.size() <= 2) {
    Element q = Element::zero(p.context());
    for (const auto& e : blocks) q = q + compose(e, compose(p, e));
    return {compose(p, q), compose(q, p)};
  }
  Element rest = Element::zero(p.context());
  for (std::size_t i = 1; i < blocks.size(); ++i) rest = rest + blocks[i];
  const Element pa = compose(blocks[0], compose(p, blocks[0]));
  const Element pr = compose(rest, compose(p, rest));
  const Element q2 = pa + pr;
  const auto [phi_r, psi_r] = iterated_witnesses(pr, blocks.subspan(1));
  return {compose(p, compose(q2, pa + phi_r)), compose(pa + psi_r, compose(q2, p))};
}

}  // namespace

SplitResult triangular_split(const Element& p, std::span<const Element> blocks) {
  check_resolution(blocks, p);
  if (!is_idempotent(p)) throw SplitError("p.idempotent", "p is not idempotent");
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Element pe = compose(p, blocks[i]);
    for (std::size_t j = i + 1; j < blocks.size(); ++j)
      if (!compose(blocks[j], pe).is_zero())
        throw SplitError("triangularity",
                         "block " + std::to_string(j) + " ∘ p ∘ block " + std::to_string(i) + " is nonzero");
  }

  std::vector<Element> comps;
  std::vector<std::string> labels;
  Element q = Element::zero(p.context());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    comps.push_back(compose(blocks[i], compose(p, blocks[i])));
    labels.push_back(std::to_string(i));
    q = q + comps.back();
  }
  auto [phi, psi] = iterated_witnesses(p, blocks);
  const bool ok = compose(phi, psi) == p && compose(psi, phi) == q;
  const Element pq = compose(p, q), qp = compose(q, p);
  const bool direct = compose(pq, qp) == p && compose(qp, pq) == q;
  return {std::move(comps), std::move(labels), std::move(q), std::move(phi), std::move(psi), ok, direct};
}

SplitResult extract_components(const Element& p, std::span<const Element> blocks, int d) {
  if (blocks.size() < 2) throw SplitError("blocks.count", "at least two blocks are required");
  SplitResult res = triangular_split(p, blocks);
  if (blocks.size() == 5)
    res.labels = {"0", "1", "middle", std::to_string(2 * d - 1), std::to_string(2 * d)};
  return res;
}

Factorization factor_idempotent(const RatMatrix& f, const RatMatrix& g, const Element& p) {
  const std::size_t n = p.dim();
  if (f.rows() != n || g.cols() != n || f.cols() != g.rows())
    throw ShapeError("factor_idempotent: f must be n x m and g m x n");
  if (matmul(f, g) != p.mat()) throw SplitError("factorization", "f·g differs from p");
  const std::size_t m = f.cols();
  Element q(make_context(m), chain(g, p.mat(), f));
  Factorization res{q, chain(p.mat(), f, q.mat()), chain(q.mat(), g, p.mat()), false};
  res.identities_hold = chain(p.mat(), f, q.mat(), g, p.mat()) == p.mat() &&
                        chain(q.mat(), g, p.mat(), f, q.mat()) == q.mat() && is_idempotent(q);
  return res;
}

Element complete_decomposition(const IdempotentFamily& fam, const ContextPtr& ctx) {
  Element delta = Element::identity(ctx);
  for (std::size_t i = 0; i < fam.size(); ++i) {
    if (*fam[i].context() != *ctx) throw AlgebraError("complete_decomposition: member in another context");
    for (std::size_t j = 0; j < fam.size(); ++j)
      if (i != j && !compose(fam[i], fam[j]).is_zero())
        throw HypothesisError(i, j, fam.size());
    delta = delta - fam[i];
  }
  return delta;
}

}  // namespace idem
