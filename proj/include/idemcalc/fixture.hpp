#pragma once

#include "idemcalc/algebra.hpp"
#include "idemcalc/ledger.hpp"
#include "idemcalc/lefschetz.hpp"
#include "idemcalc/realization.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace idem {

inline constexpr int kFixtureVersion = 1;
inline constexpr const char* kFixtureFormat = "idemcalc-fixture";

/// Malformed fixture text or inconsistent contents. `where` is either
/// "line L, column C" or a field path such as "ledgers.X.projectors[2]".
class FormatError : public std::runtime_error {
 public:
  FormatError(std::string where, const std::string& message);
  std::string where;
};

/// Members refer to entries of FixtureFile::elements. Claims request the
/// optional checks "orthogonal", "triangular" and "self_dual".
struct FamilyEntry {
  std::vector<std::string> members;
  std::vector<int> labels;
  std::vector<std::string> claims;
  /// Realization used for the action-agreement check after orthonormalizing.
  std::optional<std::string> realization;

  friend bool operator==(const FamilyEntry&, const FamilyEntry&) = default;
};

struct LedgerEntry {
  int d = 0;
  std::vector<std::string> projectors;
  /// Homology degree of each ambient coordinate, -1 for trivial ones.
  std::vector<int> degrees;
  bool self_dual = false;
  std::optional<std::string> realization;
  std::optional<std::string> certificate;

  friend bool operator==(const LedgerEntry&, const LedgerEntry&) = default;
};

struct LefschetzEntry {
  std::string L;
  std::string pi;
  std::string pi_dual;
  std::size_t degree = 0;
  /// (f, g) for the point/curve recipe.
  std::optional<std::pair<RatMatrix, RatMatrix>> factorization;
  /// (Gf, m) for the surface recipe.
  std::optional<std::pair<RatMatrix, Rational>> surface;

  friend bool operator==(const LefschetzEntry&, const LefschetzEntry&) = default;
};

struct Comparison {
  std::string first;
  std::string second;
  std::string realization;

  friend bool operator==(const Comparison&, const Comparison&) = default;
};

/// Claim that target∘x∘source = 0 for every listed generator x.
struct VanishingClaim {
  std::string source;
  std::string target;
  std::vector<std::string> generators;

  friend bool operator==(const VanishingClaim&, const VanishingClaim&) = default;
};

struct WitnessRef {
  std::string u;
  std::string v;

  friend bool operator==(const WitnessRef&, const WitnessRef&) = default;
};

/// Output of an orthonormalize run: stages[t] is the family after t passes.
struct OrthonormalizationRecord {
  std::string input;
  std::string output;
  std::size_t passes_run = 0;
  std::vector<std::string> stages;
  std::vector<OrthTable> tables;
  std::vector<std::vector<WitnessRef>> pass_witnesses;
  std::vector<WitnessRef> witnesses;

  friend bool operator==(const OrthonormalizationRecord&, const OrthonormalizationRecord&) = default;
};

/// Expected outcome of one check; `at` is compared only when present.
struct Expectation {
  std::string check;
  std::string subject;
  bool pass = true;
  std::optional<std::vector<long>> at;

  friend bool operator==(const Expectation&, const Expectation&) = default;
};

struct FixtureFile {
  int version = kFixtureVersion;
  RatMatrix pairing;
  std::map<std::string, RatMatrix> elements;
  std::map<std::string, FamilyEntry> families;
  std::map<std::string, LedgerEntry> ledgers;
  std::map<std::string, ChowRealization> realizations;
  std::map<std::string, SpecialLedgerCertificate> certificates;
  std::map<std::string, LefschetzEntry> lefschetz;
  std::map<std::string, Comparison> comparisons;
  std::map<std::string, VanishingClaim> vanishing;
  std::optional<OrthonormalizationRecord> orthonormalization;
  std::vector<Expectation> expectations;

  std::size_t dim() const noexcept { return pairing.rows(); }

  friend bool operator==(const FixtureFile&, const FixtureFile&) = default;
};

/// Parses and validates references and shapes. Throws FormatError.
FixtureFile parse_fixture(std::string_view text);
/// Canonical text: sorted keys, two-space indent, trailing newline.
std::string emit_fixture(const FixtureFile& file);

FixtureFile read_fixture(const std::filesystem::path& path);
void write_fixture(const std::filesystem::path& path, const FixtureFile& file);

/// Throws FormatError on dangling references or inconsistent shapes.
void validate_fixture(const FixtureFile& file);

/// Typed views over a validated file, sharing one context.
class FixtureView {
 public:
  explicit FixtureView(const FixtureFile& file);

  const FixtureFile& file() const noexcept { return *file_; }
  const ContextPtr& context() const noexcept { return ctx_; }
  Element element(const std::string& name) const;
  /// Members are not required to be idempotent; see family_members.
  std::vector<Element> family_members(const std::string& name) const;
  IdempotentFamily family(const std::string& name) const;
  KunnethLedger ledger(const std::string& name) const;
  LefschetzDatum lefschetz(const std::string& name) const;

 private:
  const FixtureFile* file_;
  ContextPtr ctx_;
};

/// Builders used by the generator and product commands.
void add_family(FixtureFile& file, const std::string& name, const IdempotentFamily& fam,
                std::vector<std::string> claims = {});
void add_ledger(FixtureFile& file, const std::string& name, const KunnethLedger& L, bool self_dual);

}  // namespace idem
