#pragma once

#include "idemcalc/fixture.hpp"
#include "idemcalc/report.hpp"

#include <string>
#include <vector>

namespace idem {

inline constexpr int kReportVersion = 1;

struct ExpectationOutcome {
  Expectation expectation;
  bool matched = false;
};

/// Every check a fixture admits, with subjects set to the entry names.
struct FixtureReport {
  Report report;
  std::vector<ExpectationOutcome> expectations;

  /// True iff every expectation matched and every check not named by an
  /// expectation passed.
  bool ok() const;
};

FixtureReport check_fixture(const FixtureFile& file);

/// One line per check and per expectation.
std::string format_text(const std::string& path, const FixtureReport& rep);
/// JSON document with "format": "idemcalc-report".
std::string format_structured(const std::string& path, const FixtureReport& rep);

}  // namespace idem
