#include "idemcalc/realization.hpp"

namespace idem {

GradedHomology::GradedHomology(int d, std::vector<int> degrees) : d_(d), degrees_(std::move(degrees)) {
  if (d < 0) throw std::invalid_argument("homology: negative dimension parameter");
  for (std::size_t i = 0; i < degrees_.size(); ++i)
    if (degrees_[i] < kHomTrivial || degrees_[i] > 2 * d)
      throw std::invalid_argument("homology: coordinate " + std::to_string(i) + " has degree " +
                                  std::to_string(degrees_[i]) + " outside [-1, " + std::to_string(2 * d) + "]");
}

std::vector<std::size_t> GradedHomology::block(int i) const {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < degrees_.size(); ++c)
    if (degrees_[c] == i) out.push_back(c);
  return out;
}

std::vector<std::size_t> GradedHomology::visible() const {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < degrees_.size(); ++c)
    if (degrees_[c] != kHomTrivial) out.push_back(c);
  return out;
}

RatMatrix GradedHomology::realize(const RatMatrix& a) const {
  const auto v = visible();
  return a.submatrix(v, v);
}

RatMatrix GradedHomology::restrict_to_degree(const RatMatrix& a, int i) const {
  const auto b = block(i);
  return a.submatrix(b, b);
}

Subspace GradedHomology::degree_subspace(int i) const {
  const auto v = visible();
  std::vector<Vector> vecs;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (degrees_[v[k]] != i) continue;
    Vector e(v.size());
    e[k] = 1;
    vecs.push_back(std::move(e));
  }
  return Subspace::span(v.size(), vecs);
}

bool GradedHomology::preserves_trivial(const RatMatrix& a) const {
  for (std::size_t r = 0; r < degrees_.size(); ++r) {
    if (degrees_[r] == kHomTrivial) continue;
    for (std::size_t c = 0; c < degrees_.size(); ++c)
      if (degrees_[c] == kHomTrivial && sgn(a(r, c)) != 0) return false;
  }
  return true;
}

bool ChowRealization::covers(const std::string& name) const {
  for (const auto& lv : levels)
    if (!lv.actions.count(name)) return false;
  return true;
}

const RatMatrix& ChowRealization::action(const std::string& name, std::size_t l) const {
  if (l >= levels.size()) throw MissingAction("realization has no level " + std::to_string(l));
  const auto it = levels[l].actions.find(name);
  if (it == levels[l].actions.end())
    throw MissingAction("realization has no action for '" + name + "' at level " + std::to_string(l));
  return it->second;
}

}  // namespace idem
