#pragma once

#include "idemcalc/algebra.hpp"
#include "idemcalc/ledger.hpp"
#include "idemcalc/lefschetz.hpp"
#include "idemcalc/realization.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace idem {

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// SplitMix64 (Steele, Lea, Flood 2014): state += 0x9e3779b97f4a7c15, then
/// the two xor-shift-multiply rounds. Part of the fixture contract, so other
/// implementations can reproduce generated fixtures from the seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  /// Uniform in [0, bound) by rejection of the biased low range.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform in [lo, hi].
  std::int64_t range(std::int64_t lo, std::int64_t hi);
  /// Numerator uniform in [-9, 9], then denominator uniform in {1, 2, 3}.
  Rational entry();
  /// Nonzero variant of entry(): numerator in [-9, 9] \ {0}.
  Rational nonzero_entry();

 private:
  std::uint64_t state_;
};

enum class NegativeControl { none, break_duality, break_B, break_D, non_idempotent, singular_corner, rank_mismatch };

std::string to_string(NegativeControl n);
std::optional<NegativeControl> parse_negative_control(std::string_view text);

struct GenSpec {
  std::uint64_t seed = 0;
  /// Ambient dimension; 0 lets the generator pick one.
  std::size_t dim = 0;
  /// Family size; ignored when `blocks` is given.
  std::size_t size = 0;
  /// Explicit coordinate block sizes.
  std::vector<std::size_t> blocks;
  /// Band gap: the triangular family satisfies the i - j < k hypothesis and
  /// no larger one (unless k >= size).
  std::size_t k = 1;
  /// Dimension parameter for ledgers, 0..4.
  int d = 1;
  /// Reject samples that are already mutually orthogonal.
  bool nontrivial = false;
  /// Lefschetz: build L so the surface recipe applies.
  bool surface = false;
  NegativeControl negative = NegativeControl::none;
  std::size_t max_retries = 16;
};

/// Where a negative control plants its single failure.
struct PlantedFailure {
  std::string check;
  std::vector<long> at;
};

struct GeneratedFamily {
  /// The conforming family the generator built and verified.
  IdempotentFamily family;
  /// What a fixture should carry: the family's members, except that the
  /// non_idempotent control replaces member 0 by twice itself.
  std::vector<Element> members;
  std::vector<std::size_t> blocks;
  std::vector<PlantedFailure> planted;
  /// Set for planted-triviality families: a one-level quotient realization.
  std::optional<ChowRealization> realization;
  std::size_t attempts = 1;
};

struct GeneratedLedger {
  KunnethLedger ledger;
  SpecialLedgerCertificate certificate;
  ChowRealization realization;
  std::vector<PlantedFailure> planted;
};

struct GeneratedLefschetz {
  LefschetzDatum datum;
  /// (f, g) with f·g = π_i and g·f = 1.
  std::optional<std::pair<RatMatrix, RatMatrix>> factorization;
  /// Surface data (Gf, m) when GenSpec::surface is set.
  std::optional<std::pair<RatMatrix, Rational>> surface;
  std::vector<PlantedFailure> planted;
};

/// π_i = e_i + e_i·L with L strictly block-lower and zero on bands i - j < k.
/// Supports non_idempotent.
GeneratedFamily gen_triangular_family(const GenSpec& spec);

/// Palindromic blocks, reverse-coordinate pairing; the high half is the
/// involute of the low half and an odd-sized family gets a self-adjoint
/// middle member. Supports break_duality and non_idempotent.
GeneratedFamily gen_self_dual_family(const GenSpec& spec);

/// Triangular family whose L only reads hidden coordinates, plus the
/// realization on the invariant span of the first coordinate of each block;
/// there every composite π_s∘π_r (s != r) acts as zero.
GeneratedFamily gen_planted_triviality(const GenSpec& spec);

/// Self-dual special ledger with certificate and Chow realization, d <= 4.
/// Supports break_B and break_D.
GeneratedLedger gen_special_ledger(const GenSpec& spec);

/// Lefschetz datum with a rank factorization of π_i. Supports
/// singular_corner and rank_mismatch.
GeneratedLefschetz gen_lefschetz(const GenSpec& spec);

/// Self-dual d = 1 ledger on the diagonal model (point, 2-dim h₁, point)
/// with the two-dimensional CH_0 from the curve example.
GeneratedLedger curve_ledger();

}  // namespace idem
