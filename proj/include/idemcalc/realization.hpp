#pragma once

#include "idemcalc/linalg.hpp"

#include <map>
#include <string>
#include <vector>

namespace idem {

/// Degree tag for coordinates that are homologically trivial.
inline constexpr int kHomTrivial = -1;

/// Graded homology carrier H_* = ⊕ H_i, i ∈ {0..2d}, presented as a degree
/// tag on each ambient coordinate. Coordinates tagged kHomTrivial span a
/// subspace K that is invisible to homology: ρ_H(a) is the block of a on
/// the remaining coordinates, which is multiplicative on elements that
/// keep K invariant.
class GradedHomology {
 public:
  GradedHomology() = default;
  GradedHomology(int d, std::vector<int> degrees);

  int d() const noexcept { return d_; }
  std::size_t total_dim() const noexcept { return degrees_.size(); }
  const std::vector<int>& degrees() const noexcept { return degrees_; }

  /// Ambient coordinates carrying degree i.
  std::vector<std::size_t> block(int i) const;
  /// Ambient coordinates with a homology degree.
  std::vector<std::size_t> visible() const;
  std::size_t homology_dim() const { return visible().size(); }

  /// ρ_H(a) as a matrix on the visible coordinates.
  RatMatrix realize(const RatMatrix& a) const;
  /// ρ_H(a) restricted to H_i (rows and columns of degree i).
  RatMatrix restrict_to_degree(const RatMatrix& a, int i) const;
  /// Span of the degree-i coordinate vectors inside the visible coordinates.
  Subspace degree_subspace(int i) const;
  /// True iff a maps the trivial coordinates into themselves.
  bool preserves_trivial(const RatMatrix& a) const;

  friend bool operator==(const GradedHomology&, const GradedHomology&) = default;

 private:
  int d_ = 0;
  std::vector<int> degrees_;
};

class MissingAction : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RealizationLevel {
  std::size_t dim = 0;
  /// ρ_l(element) keyed by element name; Δ acts as the identity implicitly.
  std::map<std::string, RatMatrix> actions;
  /// Class map from the level-l carrier into H_{2l}: |H_{2l}| x dim.
  RatMatrix cycle_class;

  friend bool operator==(const RealizationLevel&, const RealizationLevel&) = default;
};

/// Finite-dimensional shadow of the action of correspondences on Chow
/// groups CH_l, one carrier per level l = 0..d.
struct ChowRealization {
  std::vector<RealizationLevel> levels;

  std::size_t level_count() const noexcept { return levels.size(); }
  bool covers(const std::string& name) const;
  /// Throws MissingAction when the element has no action at level l.
  const RatMatrix& action(const std::string& name, std::size_t l) const;

  friend bool operator==(const ChowRealization&, const ChowRealization&) = default;
};

}  // namespace idem
