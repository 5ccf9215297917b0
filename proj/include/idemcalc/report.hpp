#pragma once

#include <string>
#include <vector>

namespace idem {

/// Outcome of one named check. `id` is a stable identifier such as
/// "ck.idempotent" or "murre.B"; `location` holds the first counterexample
/// indices when the check fails.
struct CheckResult {
  std::string id;
  std::string subject;
  bool passed = true;
  std::vector<long> location;
  std::string detail;

  friend bool operator==(const CheckResult&, const CheckResult&) = default;
};

inline CheckResult make_check(std::string id, std::string subject) {
  CheckResult r;
  r.id = std::move(id);
  r.subject = std::move(subject);
  return r;
}

struct Report {
  std::vector<CheckResult> checks;

  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
  const CheckResult* find(const std::string& id) const {
    for (const auto& c : checks)
      if (c.id == id) return &c;
    return nullptr;
  }
  void append(const Report& other) { checks.insert(checks.end(), other.checks.begin(), other.checks.end()); }
};

}  // namespace idem
