#include "idemcalc/fixture.hpp"

#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace idem {

using nlohmann::json;

FormatError::FormatError(std::string where_, const std::string& message)
    : std::runtime_error(where_ + ": " + message), where(std::move(where_)) {}

namespace {

// ---------------------------------------------------------------------------
// Reading. Every accessor carries the JSON path so errors point at a field.

class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  const json& raw() const { return j_; }
  const std::string& path() const { return path_; }
  [[noreturn]] void fail(const std::string& msg) const { throw FormatError(path_.empty() ? "$" : path_, msg); }

  Node at(const std::string& key) const {
    if (!j_.contains(key)) fail("missing field \"" + key + "\"");
    return child(key);
  }
  std::optional<Node> maybe(const std::string& key) const {
    if (!j_.contains(key)) return std::nullopt;
    return child(key);
  }
  Node operator[](std::size_t i) const { return Node(j_[i], path_ + "[" + std::to_string(i) + "]"); }

  void expect_object(std::initializer_list<const char*> allowed) const {
    if (!j_.is_object()) fail("expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, _] : j_.items())
      if (!ok.count(k)) child(k).fail("unknown field");
  }
  std::size_t array_size() const {
    if (!j_.is_array()) fail("expected an array");
    return j_.size();
  }

  std::string str() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }
  bool boolean() const {
    if (!j_.is_boolean()) fail("expected true or false");
    return j_.get<bool>();
  }
  long integer() const {
    if (!j_.is_number_integer()) fail("expected an integer");
    return j_.get<long>();
  }
  std::size_t count() const {
    const long v = integer();
    if (v < 0) fail("expected a non-negative integer");
    return static_cast<std::size_t>(v);
  }
  Rational rational() const {
    if (!j_.is_string()) fail("rationals are written as strings such as \"-3/4\"");
    try {
      return parse_rational(j_.get<std::string>());
    } catch (const std::invalid_argument&) {
      fail("not a rational: \"" + j_.get<std::string>() + "\"");
    }
  }

  template <class F>
  auto list(F&& each) const {
    std::vector<decltype(each(std::declval<Node>()))> out;
    const std::size_t n = array_size();
    for (std::size_t i = 0; i < n; ++i) out.push_back(each((*this)[i]));
    return out;
  }
  template <class F>
  auto dict(F&& each) const {
    if (!j_.is_object()) fail("expected an object");
    std::map<std::string, decltype(each(std::declval<Node>()))> out;
    for (const auto& [k, _] : j_.items()) out.emplace(k, each(child(k)));
    return out;
  }

  std::vector<std::string> strings() const {
    return list([](const Node& n) { return n.str(); });
  }
  std::vector<int> ints() const {
    return list([](const Node& n) { return static_cast<int>(n.integer()); });
  }
  std::vector<long> longs() const {
    return list([](const Node& n) { return n.integer(); });
  }

  RatMatrix matrix() const {
    if (j_.is_object()) {
      expect_object({"rows", "cols"});
      const std::size_t r = at("rows").count(), c = at("cols").count();
      if (r != 0) fail("the object form is only for matrices with zero rows");
      return RatMatrix(r, c);
    }
    const std::size_t rows = array_size();
    if (rows == 0) fail("a matrix with zero rows is written {\"rows\": 0, \"cols\": n}");
    const std::size_t cols = (*this)[0].array_size();
    std::vector<Rational> entries;
    entries.reserve(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
      const Node row = (*this)[r];
      if (row.array_size() != cols) row.fail("ragged matrix: expected " + std::to_string(cols) + " entries");
      for (std::size_t c = 0; c < cols; ++c) entries.push_back(row[c].rational());
    }
    return RatMatrix(rows, cols, std::move(entries));
  }

 private:
  Node child(const std::string& key) const { return Node(j_.at(key), path_.empty() ? key : path_ + "." + key); }

  const json& j_;
  std::string path_;
};

template <class T, class F>
std::map<std::string, T> section(const Node& root, const char* key, F&& each) {
  if (auto n = root.maybe(key)) return n->dict(each);
  return {};
}

std::vector<OrthTable::value_type> bool_rows(const Node& n) {
  return n.list([](const Node& row) {
    return row.list([](const Node& b) { return b.boolean(); });
  });
}

WitnessRef witness_ref(const Node& n) {
  n.expect_object({"u", "v"});
  return {n.at("u").str(), n.at("v").str()};
}

FixtureFile from_json(const Node& root) {
  root.expect_object({"format", "version", "dim", "pairing", "elements", "families", "ledgers", "realizations",
                      "certificates", "lefschetz", "comparisons", "vanishing", "orthonormalization", "expectations"});
  FixtureFile f;
  if (root.at("format").str() != kFixtureFormat) root.at("format").fail("expected \"idemcalc-fixture\"");
  f.version = static_cast<int>(root.at("version").integer());
  if (f.version != kFixtureVersion) root.at("version").fail("unsupported version " + std::to_string(f.version));

  const auto dim = root.maybe("dim");
  if (auto p = root.maybe("pairing")) {
    f.pairing = p->matrix();
    if (dim && dim->count() != f.pairing.rows()) dim->fail("does not match the pairing size");
  } else {
    if (!dim) root.fail("either \"dim\" or \"pairing\" is required");
    f.pairing = RatMatrix::identity(dim->count());
  }

  f.elements = section<RatMatrix>(root, "elements", [](const Node& n) { return n.matrix(); });
  f.families = section<FamilyEntry>(root, "families", [](const Node& n) {
    n.expect_object({"members", "labels", "claims", "realization"});
    FamilyEntry e;
    e.members = n.at("members").strings();
    if (auto l = n.maybe("labels")) e.labels = l->ints();
    if (auto c = n.maybe("claims")) {
      e.claims = c->strings();
      for (std::size_t i = 0; i < e.claims.size(); ++i)
        if (e.claims[i] != "orthogonal" && e.claims[i] != "triangular" && e.claims[i] != "self_dual")
          (*c)[i].fail("unknown claim; expected orthogonal, triangular or self_dual");
    }
    if (auto r = n.maybe("realization")) e.realization = r->str();
    return e;
  });
  f.ledgers = section<LedgerEntry>(root, "ledgers", [](const Node& n) {
    n.expect_object({"d", "projectors", "degrees", "self_dual", "realization", "certificate"});
    LedgerEntry e;
    e.d = static_cast<int>(n.at("d").integer());
    e.projectors = n.at("projectors").strings();
    e.degrees = n.at("degrees").ints();
    if (auto s = n.maybe("self_dual")) e.self_dual = s->boolean();
    if (auto r = n.maybe("realization")) e.realization = r->str();
    if (auto c = n.maybe("certificate")) e.certificate = c->str();
    return e;
  });
  f.realizations = section<ChowRealization>(root, "realizations", [](const Node& n) {
    n.expect_object({"levels"});
    ChowRealization w;
    w.levels = n.at("levels").list([](const Node& lv) {
      lv.expect_object({"dim", "actions", "cycle_class"});
      RealizationLevel level;
      level.dim = lv.at("dim").count();
      if (auto a = lv.maybe("actions")) level.actions = a->dict([](const Node& m) { return m.matrix(); });
      level.cycle_class = lv.at("cycle_class").matrix();
      return level;
    });
    return w;
  });
  f.certificates = section<SpecialLedgerCertificate>(root, "certificates", [](const Node& n) {
    n.expect_object({"factors"});
    SpecialLedgerCertificate c;
    c.factors = n.at("factors").list([](const Node& fn) {
      fn.expect_object({"degree", "carrier", "twist", "f", "g"});
      CertificateFactor x;
      x.degree = fn.at("degree").count();
      x.carrier = fn.at("carrier").str();
      x.twist = static_cast<int>(fn.at("twist").integer());
      x.f = fn.at("f").matrix();
      x.g = fn.at("g").matrix();
      return x;
    });
    return c;
  });
  f.lefschetz = section<LefschetzEntry>(root, "lefschetz", [](const Node& n) {
    n.expect_object({"L", "pi", "pi_dual", "degree", "factorization", "surface"});
    LefschetzEntry e;
    e.L = n.at("L").str();
    e.pi = n.at("pi").str();
    e.pi_dual = n.at("pi_dual").str();
    e.degree = n.at("degree").count();
    if (auto fa = n.maybe("factorization")) {
      fa->expect_object({"f", "g"});
      e.factorization.emplace(fa->at("f").matrix(), fa->at("g").matrix());
    }
    if (auto s = n.maybe("surface")) {
      s->expect_object({"gf", "m"});
      e.surface.emplace(s->at("gf").matrix(), s->at("m").rational());
    }
    return e;
  });
  f.comparisons = section<Comparison>(root, "comparisons", [](const Node& n) {
    n.expect_object({"first", "second", "realization"});
    return Comparison{n.at("first").str(), n.at("second").str(), n.at("realization").str()};
  });
  f.vanishing = section<VanishingClaim>(root, "vanishing", [](const Node& n) {
    n.expect_object({"source", "target", "generators"});
    return VanishingClaim{n.at("source").str(), n.at("target").str(), n.at("generators").strings()};
  });
  if (auto o = root.maybe("orthonormalization")) {
    o->expect_object({"input", "output", "passes_run", "stages", "tables", "pass_witnesses", "witnesses"});
    OrthonormalizationRecord rec;
    rec.input = o->at("input").str();
    rec.output = o->at("output").str();
    rec.passes_run = o->at("passes_run").count();
    rec.stages = o->at("stages").strings();
    rec.tables = o->at("tables").list(bool_rows);
    rec.pass_witnesses = o->at("pass_witnesses").list([](const Node& n) { return n.list(witness_ref); });
    rec.witnesses = o->at("witnesses").list(witness_ref);
    f.orthonormalization = std::move(rec);
  }
  if (auto e = root.maybe("expectations")) {
    f.expectations = e->list([](const Node& n) {
      n.expect_object({"check", "subject", "pass", "at"});
      Expectation x;
      x.check = n.at("check").str();
      x.subject = n.at("subject").str();
      x.pass = n.at("pass").boolean();
      if (auto a = n.maybe("at")) x.at = a->longs();
      return x;
    });
  }
  return f;
}

// ---------------------------------------------------------------------------
// Writing.

json to_json(const RatMatrix& m) {
  if (m.rows() == 0) return json{{"rows", 0}, {"cols", m.cols()}};
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (const Rational& x : m.row(r)) row.push_back(to_string(x));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const WitnessRef& w) { return json{{"u", w.u}, {"v", w.v}}; }

template <class T, class F>
void put_section(json& root, const char* key, const std::map<std::string, T>& items, F&& each) {
  if (items.empty()) return;
  json obj = json::object();
  for (const auto& [name, item] : items) obj[name] = each(item);
  root[key] = std::move(obj);
}

json to_json(const FixtureFile& f) {
  json root;
  root["format"] = kFixtureFormat;
  root["version"] = f.version;
  root["dim"] = f.dim();
  root["pairing"] = to_json(f.pairing);
  put_section(root, "elements", f.elements, [](const RatMatrix& m) { return to_json(m); });
  put_section(root, "families", f.families, [](const FamilyEntry& e) {
    json j{{"members", e.members}};
    if (!e.labels.empty()) j["labels"] = e.labels;
    if (!e.claims.empty()) j["claims"] = e.claims;
    if (e.realization) j["realization"] = *e.realization;
    return j;
  });
  put_section(root, "ledgers", f.ledgers, [](const LedgerEntry& e) {
    json j{{"d", e.d}, {"projectors", e.projectors}, {"degrees", e.degrees}, {"self_dual", e.self_dual}};
    if (e.realization) j["realization"] = *e.realization;
    if (e.certificate) j["certificate"] = *e.certificate;
    return j;
  });
  put_section(root, "realizations", f.realizations, [](const ChowRealization& w) {
    json levels = json::array();
    for (const auto& lv : w.levels) {
      json j{{"dim", lv.dim}, {"cycle_class", to_json(lv.cycle_class)}};
      if (!lv.actions.empty()) {
        json acts = json::object();
        for (const auto& [name, m] : lv.actions) acts[name] = to_json(m);
        j["actions"] = std::move(acts);
      }
      levels.push_back(std::move(j));
    }
    return json{{"levels", std::move(levels)}};
  });
  put_section(root, "certificates", f.certificates, [](const SpecialLedgerCertificate& c) {
    json factors = json::array();
    for (const auto& x : c.factors)
      factors.push_back(json{{"degree", x.degree},
                             {"carrier", x.carrier},
                             {"twist", x.twist},
                             {"f", to_json(x.f)},
                             {"g", to_json(x.g)}});
    return json{{"factors", std::move(factors)}};
  });
  put_section(root, "lefschetz", f.lefschetz, [](const LefschetzEntry& e) {
    json j{{"L", e.L}, {"pi", e.pi}, {"pi_dual", e.pi_dual}, {"degree", e.degree}};
    if (e.factorization) j["factorization"] = {{"f", to_json(e.factorization->first)}, {"g", to_json(e.factorization->second)}};
    if (e.surface) j["surface"] = {{"gf", to_json(e.surface->first)}, {"m", to_string(e.surface->second)}};
    return j;
  });
  put_section(root, "comparisons", f.comparisons, [](const Comparison& c) {
    return json{{"first", c.first}, {"second", c.second}, {"realization", c.realization}};
  });
  put_section(root, "vanishing", f.vanishing, [](const VanishingClaim& v) {
    return json{{"source", v.source}, {"target", v.target}, {"generators", v.generators}};
  });
  if (const auto& rec = f.orthonormalization) {
    json pw = json::array();
    for (const auto& pass : rec->pass_witnesses) {
      json row = json::array();
      for (const auto& w : pass) row.push_back(to_json(w));
      pw.push_back(std::move(row));
    }
    json ws = json::array();
    for (const auto& w : rec->witnesses) ws.push_back(to_json(w));
    root["orthonormalization"] = {{"input", rec->input},   {"output", rec->output}, {"passes_run", rec->passes_run},
                                  {"stages", rec->stages}, {"tables", rec->tables}, {"pass_witnesses", std::move(pw)},
                                  {"witnesses", std::move(ws)}};
  }
  if (!f.expectations.empty()) {
    json ex = json::array();
    for (const auto& e : f.expectations) {
      json j{{"check", e.check}, {"subject", e.subject}, {"pass", e.pass}};
      if (e.at) j["at"] = *e.at;
      ex.push_back(std::move(j));
    }
    root["expectations"] = std::move(ex);
  }
  return root;
}

bool scalar(const json& j) { return !j.is_array() && !j.is_object(); }

// Like dump(2), except that arrays of scalars stay on one line, so a matrix
// prints one row per line.
void pretty(std::string& out, const json& j, int indent) {
  const std::string pad(indent + 2, ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (const auto& [k, v] : j.items()) {
      out += first ? "" : ",\n";
      first = false;
      out += pad + json(k).dump() + ": ";
      pretty(out, v, indent + 2);
    }
    out += "\n" + std::string(indent, ' ') + "}";
  } else if (j.is_array() && !std::all_of(j.begin(), j.end(), scalar)) {
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      out += (i ? ",\n" : "") + pad;
      pretty(out, j[i], indent + 2);
    }
    out += "\n" + std::string(indent, ' ') + "]";
  } else if (j.is_array()) {
    out += "[";
    for (std::size_t i = 0; i < j.size(); ++i) out += (i ? ", " : "") + j[i].dump();
    out += "]";
  } else {
    out += j.dump();
  }
}

std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

// ---------------------------------------------------------------------------
// Validation.

void require(bool ok, const std::string& where, const std::string& msg) {
  if (!ok) throw FormatError(where, msg);
}

std::string shape(const RatMatrix& m) { return std::to_string(m.rows()) + "x" + std::to_string(m.cols()); }

}  // namespace

void validate_fixture(const FixtureFile& f) {
  const std::size_t n = f.dim();
  require(f.pairing.square(), "pairing", "must be square, got " + shape(f.pairing));
  require(n > 0, "pairing", "ambient dimension must be positive");
  require(n <= max_ambient_dim(), "pairing",
          "ambient dimension " + std::to_string(n) + " exceeds the cap " + std::to_string(max_ambient_dim()));
  try {
    InvolutiveContext ctx(f.pairing);
  } catch (const std::invalid_argument& e) {
    throw FormatError("pairing", e.what());
  }
  for (const auto& [name, m] : f.elements)
    require(m.rows() == n && m.cols() == n, "elements." + name, "expected " + std::to_string(n) + "x" +
                                                                    std::to_string(n) + ", got " + shape(m));

  auto element_ref = [&](const std::string& name, const std::string& where) {
    require(f.elements.count(name) > 0, where, "unknown element \"" + name + "\"");
  };
  auto realization_ref = [&](const std::string& name, const std::string& where) {
    require(f.realizations.count(name) > 0, where, "unknown realization \"" + name + "\"");
  };
  auto ledger_ref = [&](const std::string& name, const std::string& where) {
    require(f.ledgers.count(name) > 0, where, "unknown ledger \"" + name + "\"");
  };
  auto family_ref = [&](const std::string& name, const std::string& where) {
    require(f.families.count(name) > 0, where, "unknown family \"" + name + "\"");
  };

  for (const auto& [name, w] : f.realizations) {
    for (std::size_t l = 0; l < w.levels.size(); ++l) {
      const auto& lv = w.levels[l];
      const std::string at = "realizations." + name + ".levels[" + std::to_string(l) + "]";
      require(lv.cycle_class.cols() == lv.dim, at + ".cycle_class", "expected " + std::to_string(lv.dim) +
                                                                        " columns, got " + shape(lv.cycle_class));
      for (const auto& [el, m] : lv.actions)
        require(m.rows() == lv.dim && m.cols() == lv.dim, at + ".actions." + el,
                "expected " + std::to_string(lv.dim) + "x" + std::to_string(lv.dim) + ", got " + shape(m));
    }
  }

  for (const auto& [name, fam] : f.families) {
    const std::string at = "families." + name;
    require(!fam.members.empty(), at + ".members", "a family needs at least one member");
    for (std::size_t i = 0; i < fam.members.size(); ++i)
      element_ref(fam.members[i], at + ".members[" + std::to_string(i) + "]");
    require(std::set<std::string>(fam.members.begin(), fam.members.end()).size() == fam.members.size(),
            at + ".members", "member names must be distinct");
    require(fam.labels.empty() || fam.labels.size() == fam.members.size(), at + ".labels",
            "expected one label per member");
    if (fam.realization) realization_ref(*fam.realization, at + ".realization");
  }

  for (const auto& [name, L] : f.ledgers) {
    const std::string at = "ledgers." + name;
    require(L.d >= 0, at + ".d", "must be non-negative");
    require(L.projectors.size() == static_cast<std::size_t>(2 * L.d + 1), at + ".projectors",
            "expected 2d+1 = " + std::to_string(2 * L.d + 1) + " projectors");
    for (std::size_t i = 0; i < L.projectors.size(); ++i)
      element_ref(L.projectors[i], at + ".projectors[" + std::to_string(i) + "]");
    require(std::set<std::string>(L.projectors.begin(), L.projectors.end()).size() == L.projectors.size(),
            at + ".projectors", "projector names must be distinct");
    require(L.degrees.size() == n, at + ".degrees", "expected one degree per ambient coordinate");
    for (std::size_t i = 0; i < L.degrees.size(); ++i)
      require(L.degrees[i] >= kHomTrivial && L.degrees[i] <= 2 * L.d,
              at + ".degrees[" + std::to_string(i) + "]", "degree out of range");
    if (L.realization) {
      realization_ref(*L.realization, at + ".realization");
      const ChowRealization& w = f.realizations.at(*L.realization);
      for (std::size_t l = 0; l < w.levels.size(); ++l) {
        const std::size_t h = static_cast<std::size_t>(
            std::count(L.degrees.begin(), L.degrees.end(), static_cast<int>(2 * l)));
        require(w.levels[l].cycle_class.rows() == h,
                "realizations." + *L.realization + ".levels[" + std::to_string(l) + "].cycle_class",
                "expected " + std::to_string(h) + " rows to match H_" + std::to_string(2 * l) + " of ledger " + name);
      }
    }
    if (L.certificate) {
      require(f.certificates.count(*L.certificate) > 0, at + ".certificate",
              "unknown certificate \"" + *L.certificate + "\"");
      const auto& factors = f.certificates.at(*L.certificate).factors;
      for (std::size_t i = 0; i < factors.size(); ++i) {
        const auto& x = factors[i];
        const std::string fa = "certificates." + *L.certificate + ".factors[" + std::to_string(i) + "]";
        require(x.f.rows() == n && x.g.cols() == n && x.f.cols() == x.g.rows(), fa,
                "f must be " + std::to_string(n) + "xm and g mx" + std::to_string(n));
      }
    }
  }

  for (const auto& [name, e] : f.lefschetz) {
    const std::string at = "lefschetz." + name;
    element_ref(e.L, at + ".L");
    element_ref(e.pi, at + ".pi");
    element_ref(e.pi_dual, at + ".pi_dual");
    if (e.factorization) {
      const auto& [fm, gm] = *e.factorization;
      require(fm.rows() == n && gm.cols() == n && fm.cols() == gm.rows(), at + ".factorization",
              "f must be " + std::to_string(n) + "xm and g mx" + std::to_string(n));
    }
    if (e.surface) require(e.surface->first.cols() == n, at + ".surface.gf", "expected " + std::to_string(n) + " columns");
  }
  for (const auto& [name, c] : f.comparisons) {
    ledger_ref(c.first, "comparisons." + name + ".first");
    ledger_ref(c.second, "comparisons." + name + ".second");
    realization_ref(c.realization, "comparisons." + name + ".realization");
  }
  for (const auto& [name, v] : f.vanishing) {
    element_ref(v.source, "vanishing." + name + ".source");
    element_ref(v.target, "vanishing." + name + ".target");
    for (std::size_t i = 0; i < v.generators.size(); ++i)
      element_ref(v.generators[i], "vanishing." + name + ".generators[" + std::to_string(i) + "]");
  }
  if (const auto& rec = f.orthonormalization) {
    family_ref(rec->input, "orthonormalization.input");
    family_ref(rec->output, "orthonormalization.output");
    require(rec->stages.size() == rec->passes_run + 1, "orthonormalization.stages", "expected passes_run + 1 stages");
    require(rec->tables.size() == rec->stages.size(), "orthonormalization.tables", "expected one table per stage");
    require(rec->pass_witnesses.size() == rec->passes_run, "orthonormalization.pass_witnesses",
            "expected one witness list per pass");
    const std::size_t size = f.families.at(rec->input).members.size();
    for (std::size_t t = 0; t < rec->stages.size(); ++t) {
      const std::string at = "orthonormalization.stages[" + std::to_string(t) + "]";
      family_ref(rec->stages[t], at);
      require(f.families.at(rec->stages[t]).members.size() == size, at, "stage size differs from the input");
      require(rec->tables[t].size() == size, "orthonormalization.tables[" + std::to_string(t) + "]",
              "expected " + std::to_string(size) + " rows");
      for (const auto& row : rec->tables[t])
        require(row.size() == size, "orthonormalization.tables[" + std::to_string(t) + "]", "ragged table");
    }
    require(rec->stages.front() == rec->input && rec->stages.back() == rec->output, "orthonormalization.stages",
            "must run from the input family to the output family");
    auto witness_refs = [&](const std::vector<WitnessRef>& ws, const std::string& at) {
      require(ws.size() == size, at, "expected one witness per member");
      for (std::size_t r = 0; r < ws.size(); ++r) {
        element_ref(ws[r].u, at + "[" + std::to_string(r) + "].u");
        element_ref(ws[r].v, at + "[" + std::to_string(r) + "].v");
      }
    };
    for (std::size_t t = 0; t < rec->pass_witnesses.size(); ++t)
      witness_refs(rec->pass_witnesses[t], "orthonormalization.pass_witnesses[" + std::to_string(t) + "]");
    witness_refs(rec->witnesses, "orthonormalization.witnesses");
  }
}

FixtureFile parse_fixture(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::string what = e.what();
    // Drop nlohmann's "[json.exception...] parse error at line L, column C: " prefix.
    const auto col = what.find(", column ");
    const auto colon = col == std::string::npos ? col : what.find(": ", col);
    throw FormatError(line_col(text, e.byte == 0 ? 0 : e.byte - 1),
                      colon == std::string::npos ? what : what.substr(colon + 2));
  }
  FixtureFile f = from_json(Node(root, ""));
  validate_fixture(f);
  return f;
}

std::string emit_fixture(const FixtureFile& file) {
  std::string out;
  pretty(out, to_json(file), 0);
  return out + "\n";
}

FixtureFile read_fixture(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path.string(), "cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_fixture(buf.str());
}

void write_fixture(const std::filesystem::path& path, const FixtureFile& file) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << emit_fixture(file);
  if (!out.flush()) throw std::runtime_error("failed writing " + path.string());
}

// ---------------------------------------------------------------------------

FixtureView::FixtureView(const FixtureFile& file) : file_(&file), ctx_(make_context(file.pairing)) {}

Element FixtureView::element(const std::string& name) const { return Element(ctx_, file_->elements.at(name)); }

std::vector<Element> FixtureView::family_members(const std::string& name) const {
  std::vector<Element> out;
  for (const auto& m : file_->families.at(name).members) out.push_back(element(m));
  return out;
}

IdempotentFamily FixtureView::family(const std::string& name) const {
  const FamilyEntry& e = file_->families.at(name);
  return IdempotentFamily(family_members(name), e.labels, e.members);
}

KunnethLedger FixtureView::ledger(const std::string& name) const {
  const LedgerEntry& e = file_->ledgers.at(name);
  std::vector<Element> ps;
  for (const auto& p : e.projectors) ps.push_back(element(p));
  return KunnethLedger(e.d, std::move(ps), GradedHomology(e.d, e.degrees), e.projectors);
}

LefschetzDatum FixtureView::lefschetz(const std::string& name) const {
  const LefschetzEntry& e = file_->lefschetz.at(name);
  return {element(e.L), e.degree, element(e.pi), element(e.pi_dual)};
}

void add_family(FixtureFile& file, const std::string& name, const IdempotentFamily& fam,
                std::vector<std::string> claims) {
  FamilyEntry e;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    file.elements[fam.names()[i]] = fam[i].mat();
    e.members.push_back(fam.names()[i]);
  }
  e.labels = fam.labels();
  e.claims = std::move(claims);
  file.families[name] = std::move(e);
}

void add_ledger(FixtureFile& file, const std::string& name, const KunnethLedger& L, bool self_dual) {
  LedgerEntry e;
  e.d = L.d();
  e.degrees = L.homology().degrees();
  e.self_dual = self_dual;
  for (std::size_t i = 0; i < L.size(); ++i) {
    file.elements[L.names()[i]] = L[i].mat();
    e.projectors.push_back(L.names()[i]);
  }
  file.ledgers[name] = std::move(e);
}

}  // namespace idem
