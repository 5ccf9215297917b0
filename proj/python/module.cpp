#include "idemcalc/check.hpp"
#include "idemcalc/cli.hpp"
#include "idemcalc/fixture.hpp"
#include "idemcalc/fixturegen.hpp"
#include "idemcalc/splitter.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace idem;

namespace {

// Matrices cross the boundary as nested lists of "p/q" strings.
using PyMatrix = std::vector<std::vector<std::string>>;

RatMatrix to_matrix(const PyMatrix& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows[0].size();
  RatMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw ShapeError("ragged matrix at row " + std::to_string(i));
    for (std::size_t j = 0; j < c; ++j) m(i, j) = parse_rational(rows[i][j]);
  }
  return m;
}

PyMatrix from_matrix(const RatMatrix& m) {
  PyMatrix out(m.rows(), std::vector<std::string>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = to_string(m(i, j));
  return out;
}

ContextPtr context_for(std::size_t n, const std::optional<PyMatrix>& pairing) {
  return pairing ? make_context(to_matrix(*pairing)) : make_context(n);
}

Element element(const ContextPtr& ctx, const PyMatrix& m) { return Element(ctx, to_matrix(m)); }

py::dict orthonormalize_members(const std::vector<PyMatrix>& members, const std::optional<PyMatrix>& pairing,
                                std::optional<std::size_t> max_passes) {
  if (members.empty()) throw AlgebraError("empty family");
  const auto ctx = context_for(members[0].size(), pairing);
  std::vector<Element> elems;
  for (const auto& m : members) elems.push_back(element(ctx, m));
  const GSReport rep = orthonormalize(IdempotentFamily(std::move(elems)), max_passes);
  std::vector<PyMatrix> output, u, v;
  for (const auto& e : rep.output.members()) output.push_back(from_matrix(e.mat()));
  for (const auto& w : rep.witnesses) {
    u.push_back(from_matrix(w.u.mat()));
    v.push_back(from_matrix(w.v.mat()));
  }
  py::dict d;
  d["output"] = output;
  d["passes_run"] = rep.passes_run;
  d["orthogonal"] = rep.output_orthogonal();
  d["witnesses_valid"] = rep.witnesses_valid();
  d["u"] = u;
  d["v"] = v;
  return d;
}

py::dict check_text(const std::string& text, const std::string& path) {
  const FixtureReport rep = check_fixture(parse_fixture(text));
  py::dict d;
  d["ok"] = rep.ok();
  d["text"] = format_text(path, rep);
  d["structured"] = format_structured(path, rep);
  return d;
}

std::string generate_text(const std::string& kind, std::uint64_t seed, std::size_t dim, std::size_t size,
                          std::vector<std::size_t> blocks, std::size_t k, int d, const std::string& negative,
                          bool nontrivial, bool surface, std::size_t max_retries) {
  GenSpec spec;
  spec.seed = seed;
  spec.dim = dim;
  spec.size = size;
  spec.blocks = std::move(blocks);
  spec.k = k;
  spec.d = d;
  spec.nontrivial = nontrivial;
  spec.surface = surface;
  spec.max_retries = max_retries;
  const auto neg = parse_negative_control(negative);
  if (!neg) throw std::invalid_argument("unknown negative control: " + negative);
  spec.negative = *neg;
  return emit_fixture(generate_fixture(kind, spec));
}

}  // namespace

PYBIND11_MODULE(_idemcalc, m) {
  m.doc() = "Exact idempotent calculus over the rationals";

  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<HypothesisError>(m, "HypothesisError", PyExc_ValueError);
  py::register_exception<GenerationError>(m, "GenerationError", PyExc_RuntimeError);

  m.def("max_ambient_dim", &max_ambient_dim);

  m.def(
      "compose",
      [](const PyMatrix& a, const PyMatrix& b, const std::optional<PyMatrix>& pairing) {
        const auto ctx = context_for(a.size(), pairing);
        return from_matrix(compose(element(ctx, a), element(ctx, b)).mat());
      },
      py::arg("a"), py::arg("b"), py::arg("pairing") = py::none());

  m.def(
      "involute",
      [](const PyMatrix& a, const std::optional<PyMatrix>& pairing) {
        const auto ctx = context_for(a.size(), pairing);
        return from_matrix(involute(element(ctx, a)).mat());
      },
      py::arg("a"), py::arg("pairing") = py::none());

  m.def("orthonormalize", &orthonormalize_members, py::arg("members"), py::arg("pairing") = py::none(),
        py::arg("max_passes") = py::none());

  m.def(
      "canonical_fixture", [](const std::string& text) { return emit_fixture(parse_fixture(text)); },
      py::arg("text"));

  m.def("check_fixture", &check_text, py::arg("text"), py::arg("path") = "<input>");

  m.def("generate", &generate_text, py::arg("kind"), py::arg("seed") = 0, py::arg("dim") = 0, py::arg("size") = 0,
        py::arg("blocks") = std::vector<std::size_t>{}, py::arg("k") = 1, py::arg("d") = 1,
        py::arg("negative") = "none", py::arg("nontrivial") = false, py::arg("surface") = false,
        py::arg("max_retries") = 16);

  m.def(
      "product",
      [](const std::string& x, const std::string& c) {
        return emit_fixture(product_fixture(parse_fixture(x), parse_fixture(c)));
      },
      py::arg("x"), py::arg("c"));

  m.def(
      "run",
      [](const std::vector<std::string>& args) {
        std::vector<std::string> argv{"idemcalc"};
        argv.insert(argv.end(), args.begin(), args.end());
        std::ostringstream out, err;
        const int status = run_cli(argv, out, err);
        return py::make_tuple(status, out.str(), err.str());
      },
      py::arg("args"));
}
