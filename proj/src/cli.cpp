#include "idemcalc/cli.hpp"

#include "idemcalc/check.hpp"
#include "idemcalc/splitter.hpp"

#include "CLI11.hpp"

#include <atomic>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace idem {

namespace {

void add_expectations(FixtureFile& f, const std::string& subject, const std::vector<PlantedFailure>& planted) {
  for (const auto& p : planted) f.expectations.push_back({p.check, subject, false, p.at});
}

void add_realization(FixtureFile& f, const std::string& name, const ChowRealization& w) { f.realizations[name] = w; }

const std::string& single_ledger(const FixtureFile& f, const char* which) {
  if (f.ledgers.size() != 1)
    throw LedgerError(std::string(which) + " must contain exactly one ledger, found " + std::to_string(f.ledgers.size()));
  return f.ledgers.begin()->first;
}

// ---------------------------------------------------------------------------
// check

struct FileOutcome {
  int status = kExitPass;
  std::string text;
  std::string error;
};

FileOutcome check_one(const std::string& path, bool structured) {
  FileOutcome o;
  try {
    const FixtureFile f = read_fixture(path);
    const FixtureReport rep = check_fixture(f);
    o.text = format_text(path, rep);
    o.status = rep.ok() ? kExitPass : kExitFailure;
    if (structured) {
      std::ofstream js(path + ".report.json", std::ios::binary | std::ios::trunc);
      js << format_structured(path, rep);
      if (!js.flush()) {
        o.error = path + ": cannot write structured report\n";
        o.status = kExitFailure;
      }
    }
  } catch (const FormatError& e) {
    o.error = path + ": malformed fixture: " + e.what() + "\n";
    o.status = kExitMalformed;
  }
  return o;
}

int cmd_check(const std::vector<std::string>& paths, bool structured, std::size_t jobs, std::ostream& out,
              std::ostream& err) {
  std::vector<FileOutcome> results(paths.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < paths.size(); i = next++) results[i] = check_one(paths[i], structured);
  };
  const std::size_t n = std::max<std::size_t>(1, std::min(jobs, paths.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int status = kExitPass;
  for (const auto& r : results) {
    out << r.text;
    err << r.error;
    status = std::max(status, r.status);
  }
  return status;
}

// ---------------------------------------------------------------------------
// orthonormalize

std::string pick_family(const FixtureFile& f, const std::string& requested) {
  if (!requested.empty()) {
    if (!f.families.count(requested)) throw FormatError("--family", "no family named \"" + requested + "\"");
    return requested;
  }
  if (f.orthonormalization) return f.orthonormalization->output;
  if (f.families.size() != 1)
    throw FormatError("families", "expected exactly one family, found " + std::to_string(f.families.size()) +
                                      "; choose one with --family");
  return f.families.begin()->first;
}

std::string stage_name(const std::string& base, std::size_t t, std::size_t total) {
  if (t == 0) return base;
  return t == total ? base + ".gs" : base + "'" + std::to_string(t);
}

int cmd_orthonormalize(const std::string& path, const std::string& output, std::optional<std::size_t> passes,
                       const std::string& family, std::ostream& out, std::ostream& err) {
  FixtureFile f;
  std::string name;
  try {
    f = read_fixture(path);
    name = pick_family(f, family);
  } catch (const FormatError& e) {
    err << path << ": malformed fixture: " << e.what() << "\n";
    return kExitMalformed;
  }

  GSReport rep;
  try {
    rep = orthonormalize(FixtureView(f).family(name), passes);
  } catch (const HypothesisError& e) {
    err << path << ": family " << name << ": " << e.what() << "\n";
    return kExitFailure;
  } catch (const AlgebraError& e) {
    err << path << ": family " << name << ": " << e.what() << "\n";
    return kExitFailure;
  }

  const bool rerun = rep.passes_run == 0 && f.orthonormalization && f.orthonormalization->output == name;
  if (!rerun) {
    OrthonormalizationRecord rec;
    rec.input = name;
    rec.passes_run = rep.passes_run;
    rec.tables = rep.tables;
    for (std::size_t t = 0; t <= rep.passes_run; ++t) {
      const std::string sname = stage_name(name, t, rep.passes_run);
      rec.stages.push_back(sname);
      if (t > 0) add_family(f, sname, rep.stages[t]);
    }
    rec.output = rec.stages.back();
    for (std::size_t t = 0; t < rep.passes_run; ++t) {
      std::vector<WitnessRef> refs;
      for (std::size_t r = 0; r < rep.output.size(); ++r) {
        const std::string base = rep.stages[t + 1].names()[r] + ".pass";
        f.elements[base + ".u"] = rep.pass_witnesses[t][r].u.mat();
        f.elements[base + ".v"] = rep.pass_witnesses[t][r].v.mat();
        refs.push_back({base + ".u", base + ".v"});
      }
      rec.pass_witnesses.push_back(std::move(refs));
    }
    for (std::size_t r = 0; r < rep.output.size(); ++r) {
      const std::string base = rep.output.names()[r];
      f.elements[base + ".u"] = rep.witnesses[r].u.mat();
      f.elements[base + ".v"] = rep.witnesses[r].v.mat();
      rec.witnesses.push_back({base + ".u", base + ".v"});
    }
    f.orthonormalization = std::move(rec);
  }
  try {
    write_fixture(output, f);
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitFailure;
  }
  out << name << ": passes_run = " << rep.passes_run << ", output family " << f.orthonormalization->output << "\n";
  return kExitPass;
}

// ---------------------------------------------------------------------------
// product

int cmd_product(const std::string& px, const std::string& pc, const std::string& output, std::ostream& out,
                std::ostream& err) {
  FixtureFile x, c;
  for (auto [path, dst] : {std::pair{&px, &x}, std::pair{&pc, &c}}) {
    try {
      *dst = read_fixture(*path);
      single_ledger(*dst, path->c_str());
    } catch (const FormatError& e) {
      err << *path << ": malformed fixture: " << e.what() << "\n";
      return kExitMalformed;
    } catch (const LedgerError& e) {
      err << e.what() << "\n";
      return kExitMalformed;
    }
  }
  FixtureFile prod;
  try {
    prod = product_fixture(x, c);
  } catch (const std::exception& e) {
    err << "product: " << e.what() << "\n";
    return kExitFailure;
  }
  const Report ck = verify_ck(FixtureView(prod).ledger("product"));
  for (const auto& r : ck.checks)
    out << (r.passed ? "PASS" : "FAIL") << "  " << r.id << " [product]" << (r.passed ? "" : ": " + r.detail) << "\n";
  if (!ck.passed()) {
    err << "product ledger fails verification; nothing written\n";
    return kExitFailure;
  }
  try {
    write_fixture(output, prod);
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitFailure;
  }
  return kExitPass;
}

}  // namespace

// ---------------------------------------------------------------------------

FixtureFile generate_fixture(const std::string& kind, const GenSpec& spec) {
  FixtureFile f;
  auto family_fixture = [&](const GeneratedFamily& g, std::vector<std::string> claims) {
    f.pairing = g.family[0].context()->pairing();
    add_family(f, "F", g.family, std::move(claims));
    // The fixture carries the members as generated, planted failures included.
    for (std::size_t i = 0; i < g.members.size(); ++i) f.elements[g.family.names()[i]] = g.members[i].mat();
    add_expectations(f, "F", g.planted);
  };
  if (kind == "triangular") {
    family_fixture(gen_triangular_family(spec), {"triangular"});
  } else if (kind == "self-dual") {
    family_fixture(gen_self_dual_family(spec), {"triangular", "self_dual"});
  } else if (kind == "planted-triviality") {
    const GeneratedFamily g = gen_planted_triviality(spec);
    family_fixture(g, {"triangular"});
    add_realization(f, "W", *g.realization);
    f.families["F"].realization = "W";
  } else if (kind == "special-ledger" || kind == "curve") {
    if (kind == "curve" && spec.negative != NegativeControl::none)
      throw GenerationError("curve: the curve ledger is fixed; use special-ledger --d 1 for negative controls");
    const GeneratedLedger g = kind == "curve" ? curve_ledger() : gen_special_ledger(spec);
    f.pairing = g.ledger.context()->pairing();
    add_ledger(f, "X", g.ledger, check_self_dual(g.ledger));
    add_realization(f, "W", g.realization);
    f.ledgers["X"].realization = "W";
    if (!g.certificate.factors.empty()) {
      f.certificates["cert"] = g.certificate;
      f.ledgers["X"].certificate = "cert";
    }
    add_expectations(f, "X", g.planted);
  } else if (kind == "lefschetz") {
    const GeneratedLefschetz g = gen_lefschetz(spec);
    f.pairing = g.datum.L.context()->pairing();
    f.elements["L"] = g.datum.L.mat();
    f.elements["pi"] = g.datum.pi.mat();
    f.elements["pi_dual"] = g.datum.pi_dual.mat();
    f.lefschetz["lef"] = {"L", "pi", "pi_dual", g.datum.degree, g.factorization, g.surface};
    add_expectations(f, "lef", g.planted);
  } else {
    throw std::invalid_argument("unknown kind \"" + kind + "\"");
  }
  validate_fixture(f);
  return f;
}

FixtureFile product_fixture(const FixtureFile& x, const FixtureFile& c) {
  const std::string nx = single_ledger(x, "first file"), nc = single_ledger(c, "second file");
  const KunnethLedger LX = FixtureView(x).ledger(nx), LC = FixtureView(c).ledger(nc);
  const KunnethLedger P = product_ledger(LX, LC);

  FixtureFile f;
  f.pairing = P.context()->pairing();
  add_ledger(f, "product", P, x.ledgers.at(nx).self_dual && c.ledgers.at(nc).self_dual && check_self_dual(P));
  const auto& wx = x.ledgers.at(nx).realization;
  const auto& wc = c.ledgers.at(nc).realization;
  if (wx && wc) {
    f.realizations["W"] = product_realization(LX, x.realizations.at(*wx), LC, c.realizations.at(*wc));
    f.ledgers["product"].realization = "W";
  }
  validate_fixture(f);
  return f;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact idempotent calculus on correspondence fixtures", "idemcalc"};
  app.require_subcommand(1);

  std::vector<std::string> check_paths;
  std::string report = "text";
  std::size_t jobs = 1;
  auto* check = app.add_subcommand("check", "Run every check a fixture admits");
  check->add_option("files", check_paths, "Fixture files")->required();
  check->add_option("--report", report, "text, or structured to also write <file>.report.json")
      ->check(CLI::IsMember({"text", "structured"}));
  check->add_option("--jobs", jobs, "Files checked concurrently")->check(CLI::PositiveNumber);

  std::string input, output, family;
  std::optional<std::size_t> passes;
  auto* ortho = app.add_subcommand("orthonormalize", "Orthonormalize a family, recording tables and witnesses");
  ortho->add_option("file", input, "Fixture file")->required();
  ortho->add_option("--output", output, "Output fixture")->required();
  ortho->add_option("--passes", passes, "Maximum number of passes");
  ortho->add_option("--family", family, "Family to orthonormalize");

  std::string second;
  auto* product = app.add_subcommand("product", "Kunneth product of two ledgers");
  product->add_option("x", input, "Fixture with the first ledger")->required();
  product->add_option("c", second, "Fixture with the second ledger")->required();
  product->add_option("--output", output, "Output fixture")->required();

  GenSpec spec;
  std::string kind, negative = "none";
  std::size_t blocks = 0;
  std::vector<std::size_t> block_sizes;
  auto* gen = app.add_subcommand("generate", "Write a seeded fixture");
  gen->add_option("--kind", kind, "Generator")
      ->required()
      ->check(CLI::IsMember({"triangular", "self-dual", "planted-triviality", "special-ledger", "lefschetz", "curve"}));
  gen->add_option("--seed", spec.seed, "Seed");
  gen->add_option("--dim", spec.dim, "Ambient dimension (0: generator's choice)");
  gen->add_option("--blocks", blocks, "Number of blocks, i.e. family size");
  gen->add_option("--block-sizes", block_sizes, "Explicit block sizes")->delimiter(',');
  gen->add_option("--k", spec.k, "Band gap of the orthogonality hypothesis");
  gen->add_option("--d", spec.d, "Ledger dimension parameter");
  gen->add_option("--negative", negative, "Negative control to plant");
  gen->add_option("--max-retries", spec.max_retries, "Resampling budget");
  gen->add_flag("--nontrivial", spec.nontrivial, "Reject already orthogonal samples");
  gen->add_flag("--surface", spec.surface, "Lefschetz: include surface data");
  gen->add_option("--output", output, "Output fixture (default: standard output)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "idemcalc: " << e.what() << "\n";
    return kExitMalformed;
  }

  if (check->parsed()) return cmd_check(check_paths, report == "structured", jobs, out, err);
  if (ortho->parsed()) return cmd_orthonormalize(input, output, passes, family, out, err);
  if (product->parsed()) return cmd_product(input, second, output, out, err);

  const auto neg = parse_negative_control(negative);
  if (!neg) {
    err << "idemcalc: unknown negative control \"" << negative << "\"\n";
    return kExitMalformed;
  }
  spec.negative = *neg;
  spec.size = blocks;
  spec.blocks = block_sizes;
  FixtureFile f;
  try {
    f = generate_fixture(kind, spec);
  } catch (const std::exception& e) {
    err << "generate: " << e.what() << "\n";
    return kExitFailure;
  }
  if (output.empty()) {
    out << emit_fixture(f);
    return kExitPass;
  }
  try {
    write_fixture(output, f);
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitFailure;
  }
  return kExitPass;
}

}  // namespace idem
