#pragma once

#include "idemcalc/fixture.hpp"
#include "idemcalc/fixturegen.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace idem {

/// Exit statuses of the command-line tool.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitMalformed = 2;

/// Runs the tool on args (args[0] is the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Fixture for one generator kind: "triangular", "self-dual",
/// "planted-triviality", "special-ledger", "lefschetz" or "curve". Planted
/// failures become expectations. Throws GenerationError.
FixtureFile generate_fixture(const std::string& kind, const GenSpec& spec);

/// Product of the single ledgers of two files, with the product realization
/// when both carry one. Throws LedgerError if either file lacks a unique ledger.
FixtureFile product_fixture(const FixtureFile& x, const FixtureFile& c);

}  // namespace idem
