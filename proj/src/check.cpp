#include "idemcalc/check.hpp"

#include "idemcalc/splitter.hpp"

#include "json.hpp"

#include <algorithm>
#include <sstream>

namespace idem {

namespace {

CheckResult failed(CheckResult r, std::vector<long> at, std::string detail) {
  r.passed = false;
  r.location = std::move(at);
  r.detail = std::move(detail);
  return r;
}

long as_long(std::size_t i) { return static_cast<long>(i); }

/// Runs body, turning library exceptions into a failed result.
template <class F>
CheckResult guarded(CheckResult r, F&& body) {
  try {
    return body(std::move(r));
  } catch (const std::exception& e) {
    return failed(std::move(r), {}, e.what());
  }
}

void check_family(const FixtureView& view, const std::string& name, Report& out) {
  const FamilyEntry& entry = view.file().families.at(name);
  const std::vector<Element> m = view.family_members(name);
  const std::size_t n = m.size();
  auto claimed = [&](const char* c) { return std::find(entry.claims.begin(), entry.claims.end(), c) != entry.claims.end(); };

  CheckResult idem = make_check("family.idempotent", name);
  for (std::size_t i = 0; i < n && idem.passed; ++i)
    if (!is_idempotent(m[i])) idem = failed(idem, {as_long(i)}, entry.members[i] + " is not idempotent");
  out.checks.push_back(idem);

  auto zero_pairs = [&](const char* id, auto&& wanted) {
    CheckResult r = make_check(id, name);
    for (std::size_t i = 0; i < n && r.passed; ++i)
      for (std::size_t j = 0; j < n && r.passed; ++j)
        if (i != j && wanted(i, j) && !compose(m[i], m[j]).is_zero())
          r = failed(r, {as_long(i), as_long(j)}, entry.members[i] + "∘" + entry.members[j] + " != 0");
    out.checks.push_back(r);
  };
  if (claimed("orthogonal")) zero_pairs("family.orthogonal", [](std::size_t, std::size_t) { return true; });
  if (claimed("triangular")) zero_pairs("family.triangular", [](std::size_t i, std::size_t j) { return i < j; });

  if (claimed("self_dual")) {
    CheckResult r = make_check("family.self_dual", name);
    for (std::size_t i = 0; i < n && r.passed; ++i)
      if (involute(m[i]) != m[n - 1 - i])
        r = failed(r, {as_long(i)}, entry.members[i] + "* != " + entry.members[n - 1 - i]);
    out.checks.push_back(r);
  }

  if (entry.realization) {
    out.checks.push_back(guarded(make_check("gs.action_agreement", name), [&](CheckResult r) {
      const ChowRealization& w = view.file().realizations.at(*entry.realization);
      const IdempotentFamily fam = view.family(name);
      const GSReport rep = orthonormalize(fam);
      const ChowRealization ext = extend_with_outputs(w, rep);
      for (std::size_t i = 0; i < n; ++i)
        if (!action_agreement(fam, rep.output, i, ext))
          return failed(r, {as_long(i)}, "realized actions of " + entry.members[i] + " and its output differ");
      return r;
    }));
  }
}

void check_ledger(const FixtureView& view, const std::string& name, Report& out) {
  const LedgerEntry& entry = view.file().ledgers.at(name);
  KunnethLedger L;
  try {
    L = view.ledger(name);
  } catch (const std::exception& e) {
    out.checks.push_back(failed(make_check("ledger.shape", name), {}, e.what()));
    return;
  }
  for (CheckResult c : verify_ck(L).checks) {
    c.subject = name;
    out.checks.push_back(std::move(c));
  }
  if (entry.self_dual) {
    CheckResult r = make_check("ledger.self_dual", name);
    if (auto i = first_ledger_duality_failure(L))
      r = failed(r, {as_long(*i)}, "p" + std::to_string(*i) + "* != p" + std::to_string(2 * L.d() - *i));
    out.checks.push_back(r);
  }
  if (entry.certificate) {
    CheckResult c = verify_certificate(L, view.file().certificates.at(*entry.certificate));
    c.subject = name;
    out.checks.push_back(std::move(c));
  }
  if (entry.realization) {
    const ChowRealization& w = view.file().realizations.at(*entry.realization);
    using Checker = CheckResult (*)(const KunnethLedger&, const ChowRealization&);
    const std::pair<const char*, Checker> checkers[] = {
        {"realization.valid", validate_realization}, {"murre.B", check_murre_B}, {"murre.D", check_murre_D}};
    for (const auto& [id, check] : checkers) {
      CheckResult c = guarded(make_check(id, name), [&](CheckResult) { return check(L, w); });
      c.subject = name;
      out.checks.push_back(std::move(c));
    }
  }
}

void check_lefschetz(const FixtureView& view, const std::string& name, Report& out) {
  const LefschetzEntry& entry = view.file().lefschetz.at(name);
  const LefschetzDatum D = view.lefschetz(name);
  const std::vector<long> at{as_long(D.degree)};

  std::optional<LefschetzOutcome> cert;
  out.checks.push_back(guarded(make_check("lefschetz.certificate", name), [&](CheckResult r) {
    cert = lefschetz_certify(D);
    if (!cert->certified()) return failed(r, at, "refused (" + cert->refusal + "): " + cert->detail);
    if (!verify_inverse(D, *cert->beta)) return failed(r, at, "returned inverse does not re-verify");
    return r;
  }));

  // A recipe's inverse must re-verify and agree with the solver's as a
  // morphism between the images.
  auto recipe = [&](const char* id, auto&& compute) {
    out.checks.push_back(guarded(make_check(id, name), [&](CheckResult r) {
      Element beta = D.pi;
      try {
        beta = compute();
      } catch (const LefschetzError& e) {
        return failed(r, at, e.what());
      }
      if (!verify_inverse(D, beta)) return failed(r, at, "inverse does not re-verify");
      if (cert && cert->certified() &&
          compose(D.pi_dual, compose(beta, D.pi)) != compose(D.pi_dual, compose(*cert->beta, D.pi)))
        return failed(r, at, "disagrees with the solver's inverse");
      return r;
    }));
  };
  if (entry.factorization)
    recipe("lefschetz.factorization",
           [&] { return inverse_via_factorization(D, entry.factorization->first, entry.factorization->second); });
  if (entry.surface)
    recipe("lefschetz.surface", [&] { return surface_case_inverse(D, entry.surface->first, entry.surface->second); });
}

void check_record(const FixtureView& view, Report& out) {
  const OrthonormalizationRecord& rec = *view.file().orthonormalization;
  std::vector<std::vector<Element>> stages;
  for (const auto& s : rec.stages) stages.push_back(view.family_members(s));
  const std::size_t n = stages.front().size();

  CheckResult replay = make_check("gs.pass.replay", rec.input);
  CheckResult orth = make_check("gs.pass.orthogonality", rec.input);
  CheckResult pass_w = make_check("gs.pass.witness", rec.input);
  for (std::size_t t = 0; t < stages.size(); ++t) {
    std::vector<RatMatrix> mats;
    for (const auto& e : stages[t]) mats.push_back(e.mat());
    const OrthTable table = orthogonality_table(mats);
    if (orth.passed && table != rec.tables[t]) orth = failed(orth, {as_long(t)}, "recorded table differs");
    // After t passes the stage satisfies the hypothesis with k = t + 1.
    for (std::size_t i = 0; i < n && orth.passed; ++i)
      for (std::size_t j = 0; j < n && orth.passed; ++j)
        if (i != j && (long)i - (long)j < (long)t + 1 && !table[i][j])
          orth = failed(orth, {as_long(t), as_long(i), as_long(j)}, "stage violates its orthogonality bound");
    if (t + 1 == stages.size()) break;

    if (replay.passed) {
      const std::vector<RatMatrix> next = gs_formula(mats);
      for (std::size_t r = 0; r < n; ++r)
        if (next[r] != stages[t + 1][r].mat()) {
          replay = failed(replay, {as_long(t), as_long(r)}, "pass output does not match the formula");
          break;
        }
    }
    for (std::size_t r = 0; r < n && pass_w.passed; ++r) {
      const WitnessRef& ref = rec.pass_witnesses[t][r];
      const Element u = view.element(ref.u), v = view.element(ref.v);
      const Element &pi = stages[t][r], &p = stages[t + 1][r];
      if (u != compose(pi, p) || v != compose(p, pi) || compose(v, u) != p || compose(u, v) != pi)
        pass_w = failed(pass_w, {as_long(t), as_long(r)}, "witness identities fail");
    }
  }
  out.checks.push_back(replay);
  out.checks.push_back(orth);
  out.checks.push_back(pass_w);

  CheckResult comp = make_check("gs.witness", rec.input);
  for (std::size_t r = 0; r < n && comp.passed; ++r) {
    const Element u = view.element(rec.witnesses[r].u), v = view.element(rec.witnesses[r].v);
    if (compose(v, u) != stages.back()[r] || compose(u, v) != stages.front()[r])
      comp = failed(comp, {as_long(r)}, "composite witness identities fail");
  }
  out.checks.push_back(comp);

  CheckResult fin = make_check("gs.output.orthogonal", rec.output);
  for (std::size_t i = 0; i < n && fin.passed; ++i)
    for (std::size_t j = 0; j < n && fin.passed; ++j)
      if (i != j && !compose(stages.back()[i], stages.back()[j]).is_zero())
        fin = failed(fin, {as_long(i), as_long(j)}, "output is not mutually orthogonal");
  out.checks.push_back(fin);
}

bool matches(const Expectation& e, const CheckResult& c) {
  return c.id == e.check && c.subject == e.subject && c.passed == e.pass && (!e.at || c.location == *e.at);
}

std::string location_text(const std::vector<long>& at) {
  std::string s = "(";
  for (std::size_t i = 0; i < at.size(); ++i) s += (i ? "," : "") + std::to_string(at[i]);
  return s + ")";
}

}  // namespace

bool FixtureReport::ok() const {
  for (const auto& e : expectations)
    if (!e.matched) return false;
  for (const auto& c : report.checks) {
    if (c.passed) continue;
    const bool named = std::any_of(expectations.begin(), expectations.end(), [&](const ExpectationOutcome& e) {
      return e.expectation.check == c.id && e.expectation.subject == c.subject;
    });
    if (!named) return false;
  }
  return true;
}

FixtureReport check_fixture(const FixtureFile& file) {
  const FixtureView view(file);
  FixtureReport rep;
  Report& out = rep.report;
  for (const auto& [name, _] : file.families) check_family(view, name, out);
  for (const auto& [name, _] : file.ledgers) check_ledger(view, name, out);
  for (const auto& [name, c] : file.comparisons) {
    out.checks.push_back(guarded(make_check("murre.C", name), [&](CheckResult) {
      CheckResult r = compare_filtrations(view.ledger(c.first), view.ledger(c.second),
                                          file.realizations.at(c.realization));
      r.subject = name;
      return r;
    }));
  }
  for (const auto& [name, _] : file.lefschetz) check_lefschetz(view, name, out);
  for (const auto& [name, v] : file.vanishing) {
    std::vector<Element> gens;
    for (const auto& g : v.generators) gens.push_back(view.element(g));
    CheckResult r = make_check("lefschetz.vanishing", name);
    for (std::size_t i = 0; i < gens.size() && r.passed; ++i) {
      const Element one[] = {gens[i]};
      if (!corner_vanishes(view.element(v.source), view.element(v.target), one))
        r = failed(r, {as_long(i)}, v.generators[i] + " has a nonzero corner");
    }
    out.checks.push_back(r);
  }
  if (file.orthonormalization) check_record(view, out);

  for (const auto& e : file.expectations) {
    const bool hit = std::any_of(out.checks.begin(), out.checks.end(), [&](const CheckResult& c) { return matches(e, c); });
    rep.expectations.push_back({e, hit});
  }
  return rep;
}

std::string format_text(const std::string& path, const FixtureReport& rep) {
  std::ostringstream os;
  os << path << "\n";
  for (const auto& c : rep.report.checks) {
    os << "  " << (c.passed ? "PASS" : "FAIL") << "  " << c.id << " [" << c.subject << "]";
    if (!c.passed) {
      if (!c.location.empty()) os << " at " << location_text(c.location);
      if (!c.detail.empty()) os << ": " << c.detail;
    }
    os << "\n";
  }
  for (const auto& e : rep.expectations) {
    const Expectation& x = e.expectation;
    os << "  " << (e.matched ? "MATCH" : "MISMATCH") << " expected " << x.check << " [" << x.subject << "] "
       << (x.pass ? "passes" : "fails");
    if (x.at) os << " at " << location_text(*x.at);
    os << "\n";
  }
  os << "  " << (rep.ok() ? "ok" : "FAILED") << "\n";
  return os.str();
}

std::string format_structured(const std::string& path, const FixtureReport& rep) {
  using nlohmann::json;
  json checks = json::array();
  for (const auto& c : rep.report.checks) {
    json j{{"id", c.id}, {"subject", c.subject}, {"pass", c.passed}};
    if (!c.location.empty()) j["at"] = c.location;
    if (!c.detail.empty()) j["detail"] = c.detail;
    checks.push_back(std::move(j));
  }
  json expectations = json::array();
  for (const auto& e : rep.expectations) {
    json j{{"check", e.expectation.check},
           {"subject", e.expectation.subject},
           {"pass", e.expectation.pass},
           {"matched", e.matched}};
    if (e.expectation.at) j["at"] = *e.expectation.at;
    expectations.push_back(std::move(j));
  }
  const json doc{{"format", "idemcalc-report"}, {"version", kReportVersion}, {"fixture", path},
                 {"ok", rep.ok()},              {"checks", checks},           {"expectations", expectations}};
  return doc.dump(2) + "\n";
}

}  // namespace idem
