// equislice: batch front end. Every command builds a JSON report; text output renders it.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "equislice/darboux.hpp"
#include "equislice/hypertoric.hpp"
#include "equislice/linalg.hpp"
#include "equislice/poisson.hpp"
#include "equislice/quantization.hpp"
#include "equislice/quotient.hpp"
#include "io/equislice_io.hpp"
#include "io/selftest.hpp"

using namespace equislice;
using io::InputError;
using io::Json;

namespace {

enum Status { kOk = 0, kFail = 1, kInput = 2 };

struct Globals {
  std::optional<int> order;
  std::optional<int> degree_cap;
  bool json = false;
  bool pretty = false;
  unsigned long seed = 1;
  std::string output;
};

struct Outcome {
  Json report;
  int status = kOk;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<int> int_list(const std::string& s, const std::string& what) {
  std::vector<int> out;
  for (auto& item : split_list(s)) {
    try {
      size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError(what + ": bad integer \"" + item + "\"");
    }
  }
  return out;
}

// Runs f, turning library argument errors into input errors tagged with `where`.
template <class F>
auto input_guard(const std::string& where, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const InputError&) {
    throw;
  } catch (const RewriteBudgetExceeded&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw InputError(where + ": " + e.what());
  }
}

int variable_index(const PoissonPresentation& P, const std::string& name, const std::string& where) {
  int i = P.context()->index(name);
  if (i < 0) throw InputError(where + ": unknown variable \"" + name + "\"");
  return i;
}

// poisson

Outcome poisson_jacobi(const Globals& g, const std::string& input) {
  PoissonPresentation P = io::presentation_from_json(io::load_input(input), g.order);
  JacobiReport r = check_jacobi(P);
  auto rel = check_relation_ideal(P);
  Json report = io::jacobi_json(P, r);
  Json rv = Json::array();
  for (auto& v : rel)
    rv.push_back(Json{{"relation", v.relation + 1}, {"generator", P.context()->names[v.generator]}, {"residue", v.residue.to_string()}});
  report["relation_violations"] = rv;
  return {report, r.pass && rel.empty() ? kOk : kFail};
}

Outcome poisson_degree(const Globals& g, const std::string& input, const std::string& weights) {
  PoissonPresentation P = io::presentation_from_json(io::load_input(input), g.order);
  std::vector<int> w = weights.empty() ? P.context()->weights : int_list(weights, "--weights");
  if (static_cast<int>(w.size()) != P.size()) throw InputError("--weights: expected " + std::to_string(P.size()) + " entries");
  HomogeneityResult r = homogeneity_degree(P, w);
  Json report = io::homogeneity_json(r);
  report["weights"] = w;
  report["declared_degree"] = P.declared_degree ? Json(*P.declared_degree) : Json(nullptr);
  bool ok = r.degree.has_value() && (!P.declared_degree || !weights.empty() || *P.declared_degree == *r.degree);
  report["matches_declared"] = ok;
  return {report, ok ? kOk : kFail};
}

Outcome poisson_center(const Globals& g, const std::string& input, int wmin, int wmax, int laurent) {
  PoissonPresentation P = io::presentation_from_json(io::load_input(input), g.order);
  MonomialBounds b;
  if (g.degree_cap) b.degree_cap = *g.degree_cap;
  b.laurent_bound = laurent;
  if (wmin > wmax) throw InputError("--weight-min: exceeds --weight-max");
  auto blocks = input_guard("center", [&] { return poisson_center_basis(P, wmin, wmax, b); });
  return {Json{{"order", P.context()->order}, {"blocks", io::center_json(blocks)}}, kOk};
}

Outcome poisson_hp0(const Globals& g, const std::string& input) {
  PoissonPresentation P = io::presentation_from_json(io::load_input(input), g.order);
  GradedDimTable t = input_guard("hp0", [&] { return hp0_graded(P, g.degree_cap.value_or(6)); });
  return {io::hp0_json(t), kOk};
}

Outcome poisson_gradings(const Globals& g, const std::string& input, std::optional<int> target, int bound) {
  PoissonPresentation P = io::presentation_from_json(io::load_input(input), g.order);
  if (!target) target = P.declared_degree;
  if (!target) throw InputError("--target: required when the presentation declares no degree");
  auto found = input_guard("gradings", [&] { return grading_search(P, *target, bound); });
  return {Json{{"target_degree", *target}, {"weight_bound", bound}, {"count", found.size()}, {"gradings", found}},
          found.empty() ? kFail : kOk};
}

// darboux

PoissonPresentation scrambled(const PoissonPresentation& P, int rounds, unsigned long seed) {
  if (rounds <= 0) return P;
  LeafShape s = input_guard("scramble", [&] { return leaf_shape(P); });
  std::mt19937_64 rng(seed);
  PoissonPresentation Q = P;
  for (int i = 0; i < rounds; ++i) Q = transform(Q, random_scramble(Q.context(), s.t, rng));
  return Q;
}

Outcome darboux_normalize(const Globals& g, const std::string& input, int rounds) {
  // Scrambling truncates, so the input is loaded two orders above the target.
  Json doc = io::load_input(input);
  const int N = g.order.value_or(io::presentation_from_json(doc, std::nullopt).context()->order);
  PoissonPresentation P = io::presentation_from_json(doc, N + 2);
  P = scrambled(P, rounds, g.seed);
  NormalizeOptions opt;
  if (g.degree_cap) opt.degree_cap = *g.degree_cap;
  DecompositionCertificate c = input_guard("normalize", [&] { return normalize_full(P, N, opt); });
  Json report = io::certificate_json(c);
  report["scramble_rounds"] = rounds;
  return {report, c.leaf_block_standard && c.couplings_vanish ? kOk : kFail};
}

Outcome darboux_slice(const Globals& g, const std::string& input, const std::string& leaf) {
  PoissonPresentation P = io::presentation_from_json(io::load_input(input), g.order);
  std::vector<int> vars;
  if (leaf.empty()) {
    LeafShape s = input_guard("slice", [&] { return leaf_shape(P); });
    vars.push_back(s.t);
  } else {
    for (auto& n : split_list(leaf)) vars.push_back(variable_index(P, n, "--leaf"));
  }
  SliceOptions opt;
  if (g.degree_cap) opt.degree_cap = *g.degree_cap;
  SliceResult s = input_guard("slice", [&] { return extract_slice(P, vars, opt); });
  return {io::slice_json(s), s.unexpressed.empty() ? kOk : kFail};
}

// hypertoric

struct HyperInput {
  TorusActionMatrix A;
  LeafDescriptor leaf;
  NonvanishingData nonzero;
  std::optional<std::vector<int>> G;
};

HyperInput hyper_input(const std::string& input, const std::string& flat, const std::string& nonzero) {
  Json doc = io::load_input(input);
  HyperInput h{io::torus_from_json(doc), {}, {}, std::nullopt};
  std::vector<int> F;
  if (!flat.empty()) {
    F = int_list(flat, "--flat");
  } else if (doc.contains("flat")) {
    if (!doc["flat"].is_array()) throw InputError("/flat: expected an array");
    for (size_t i = 0; i < doc["flat"].size(); ++i) {
      if (!doc["flat"][i].is_number_integer()) throw InputError("/flat/" + std::to_string(i) + ": expected an integer");
      F.push_back(doc["flat"][i].get<int>());
    }
  }
  for (int& f : F) {
    if (f < 1 || f > h.A.n()) throw InputError("flat: index " + std::to_string(f) + " out of range");
    --f;
  }
  h.leaf = input_guard("flat", [&] { return leaf_for_flat(h.A, F); });
  std::string nz = nonzero;
  if (nz.empty() && doc.contains("nonzero")) {
    if (!doc["nonzero"].is_string()) throw InputError("/nonzero: expected a string");
    nz = doc["nonzero"].get<std::string>();
  }
  if (nz.empty()) {
    // Default base point: nonzero exactly off the flat.
    h.nonzero = NonvanishingData::generic(h.A.n());
    for (int f : F) h.nonzero.x[f] = h.nonzero.y[f] = false;
  } else {
    h.nonzero = input_guard("nonzero", [&] { return NonvanishingData::parse(h.A.n(), nz); });
  }
  if (doc.contains("G")) {
    std::vector<int> G;
    for (size_t i = 0; i < doc["G"].size(); ++i) {
      if (!doc["G"][i].is_number_integer()) throw InputError("/G/" + std::to_string(i) + ": expected an integer");
      G.push_back(doc["G"][i].get<int>() - 1);
    }
    h.G = G;
  }
  return h;
}

Outcome hyper_unimodular(const std::string& input) {
  TorusActionMatrix A = io::torus_from_json(io::load_input(input));
  UnimodularityResult r = check_unimodular(A);
  return {io::unimodular_json(r), r.unimodular ? kOk : kFail};
}

Outcome hyper_leaves(const std::string& input) {
  TorusActionMatrix A = io::torus_from_json(io::load_input(input));
  auto leaves = input_guard("leaves", [&] { return enumerate_leaves(A); });
  Json out = Json::array();
  Json dims = Json::array();
  for (auto& l : leaves) {
    out.push_back(io::leaf_json(l));
    dims.push_back(l.leaf_dim);
  }
  return {Json{{"count", leaves.size()}, {"dimensions", dims}, {"leaves", out}}, kOk};
}

Outcome hyper_decompose(const Globals& g, const std::string& input, const std::string& flat,
                        const std::string& nonzero, bool verify) {
  HyperInput h = hyper_input(input, flat, nonzero);
  DecompositionReport r = input_guard("decompose", [&] { return decompose_at(h.A, h.leaf, h.nonzero, h.G); });
  Json report = io::decomposition_json(h.A, r);
  if (!verify) return {report, kOk};
  HypertoricVerification v = verify_decomposition(h.A, r, g.order.value_or(6));
  report["verification"] = io::verification_json(v);
  return {report, v.pass ? kOk : kFail};
}

// quotient

Outcome quotient_parabolics(const std::string& input) {
  GroupData G = io::group_from_json(io::load_input(input));
  auto ps = parabolic_subgroups(G);
  Json list = Json::array();
  for (auto& p : ps) list.push_back(io::parabolic_json(G, p));
  return {Json{{"group", io::group_json(G)}, {"count", ps.size()}, {"parabolics", list}}, kOk};
}

Outcome quotient_reflections(const std::string& input) {
  GroupData G = io::group_from_json(io::load_input(input));
  return {Json{{"group", io::group_json(G)}, {"reflections", io::reflections_json(G, symplectic_reflections(G))}}, kOk};
}

Outcome quotient_slice(const std::string& input, const std::string& point) {
  Json doc = io::load_input(input);
  GroupData G = io::group_from_json(doc);
  std::vector<Scalar> v;
  if (!point.empty()) {
    for (int x : int_list(point, "--point")) v.emplace_back(x);
  } else if (doc.contains("point")) {
    v = io::vector_from_json(doc["point"], G.cyclotomic_order, "/point");
  } else {
    throw InputError("point: required (document field \"point\" or --point)");
  }
  if (static_cast<int>(v.size()) != G.dim) throw InputError("point: expected " + std::to_string(G.dim) + " entries");
  // The stabilizer of v is the parabolic of smallest leaf dimension whose fixed space contains v.
  auto ps = parabolic_subgroups(G);
  for (auto it = ps.rbegin(); it != ps.rend(); ++it) {
    if (it->fixed_basis.empty()) continue;
    auto cols = it->fixed_basis;
    const int r = exact_rank(ExactMatrix::from_columns(G.dim, cols));
    cols.push_back(v);
    if (exact_rank(ExactMatrix::from_columns(G.dim, cols)) != r) continue;
    LeafSliceSummary s = input_guard("point", [&] { return leaf_slice_data(G, *it, v); });
    Json report = io::leaf_slice_json(s);
    report["point"] = io::scalar_vector_json(v);
    return {report, kOk};
  }
  throw InputError("point: v = 0 lies on the zero-dimensional leaf");
}

Outcome quotient_sra(const std::string& input) {
  GroupData G = io::group_from_json(io::load_input(input));
  SRAData s = symplectic_reflections(G);
  Json rel = Json::array();
  for (int i = 0; i < G.dim; ++i)
    for (int j = i + 1; j < G.dim; ++j) {
      std::vector<Scalar> x(G.dim, Scalar(0)), y(G.dim, Scalar(0));
      x[i] = Scalar(1);
      y[j] = Scalar(1);
      rel.push_back(Json{{"x", "e" + std::to_string(i + 1)},
                         {"y", "e" + std::to_string(j + 1)},
                         {"rhs", sra_relation(G, s, x, y).to_string(G)}});
    }
  return {Json{{"group", io::group_json(G)}, {"parameters", s.classes.size()}, {"relations", rel}}, kOk};
}

// quantize

io::HbarJob hbar_input(const Globals& g, const Json& doc) { return io::hbar_from_json(doc, g.order); }

std::string doc_string(const Json& doc, const std::string& key, const std::string& fallback) {
  if (!doc.contains(key)) return fallback;
  if (!doc[key].is_string()) throw InputError("/" + key + ": expected a string");
  return doc[key].get<std::string>();
}

QElement parse_q(const HbarPresentation& A, const std::string& text, const std::string& where) {
  return input_guard(where, [&] { return A.parse(text); });
}

Outcome quantize_build(const Globals& g, const std::string& input) {
  io::HbarJob job = hbar_input(g, io::load_input(input));
  auto overlaps = overlap_check(job.algebra);
  Json ov = Json::array();
  const auto& n = job.algebra.names();
  for (auto& o : overlaps)
    ov.push_back(Json{{"triple", Json::array({n[o.l], n[o.j], n[o.i]})}, {"residue", job.algebra.to_string(o.residue)}});
  return {Json{{"algebra", io::hbar_to_json(job.algebra)}, {"overlap_failures", ov}}, overlaps.empty() ? kOk : kFail};
}

Outcome quantize_normalform(const Globals& g, const std::string& input, std::vector<std::string> words) {
  Json doc = io::load_input(input);
  io::HbarJob job = hbar_input(g, doc);
  if (words.empty() && doc.contains("words")) {
    for (size_t i = 0; i < doc["words"].size(); ++i) {
      if (!doc["words"][i].is_string()) throw InputError("/words/" + std::to_string(i) + ": expected a string");
      words.push_back(doc["words"][i].get<std::string>());
    }
  }
  if (words.empty()) throw InputError("words: none given (document field \"words\" or --word)");
  Json out = Json::array();
  for (size_t i = 0; i < words.size(); ++i) {
    QElement a = parse_q(job.algebra, words[i], "word " + std::to_string(i + 1));
    out.push_back(Json{{"word", words[i]}, {"normal_form", job.algebra.to_string(a)}});
  }
  return {Json{{"algebra", job.algebra.name}, {"order", job.algebra.order()}, {"normal_forms", out}}, kOk};
}

Outcome quantize_central(const Globals& g, const std::string& input, std::string element) {
  Json doc = io::load_input(input);
  io::HbarJob job = hbar_input(g, doc);
  if (element.empty()) element = doc_string(doc, "element", "");
  if (element.empty() && job.algebra.index("e") >= 0 && job.algebra.index("f") >= 0 && job.algebra.index("h") >= 0)
    element = "e*f + f*e + 1/2*h*h";
  if (element.empty()) throw InputError("element: none given (document field \"element\" or --element)");
  QElement c = parse_q(job.algebra, element, "element");
  const int cap = g.degree_cap.value_or(6);
  CentralityResult r = centrality_check(job.algebra, c, cap);
  Json report = io::centrality_json(job.algebra, r);
  report["element"] = job.algebra.to_string(c);
  report["degree_cap"] = cap;
  report["hbar_order"] = job.algebra.order();
  return {report, r.pass ? kOk : kFail};
}

Outcome quantize_slice(const Globals& g, const std::string& input, std::string t, std::string z,
                       std::optional<int> wmin, std::optional<int> wmax, int laurent) {
  Json doc = io::load_input(input);
  io::HbarJob job = hbar_input(g, doc);
  const HbarPresentation& A = job.algebra;
  if (t.empty()) t = doc_string(doc, "t", "");
  if (t.empty())
    for (int i = 0; i < A.size(); ++i)
      if (A.invertible()[i]) {
        t = A.names()[i];
        break;
      }
  if (t.empty()) throw InputError("t: no invertible generator; pass --t");
  if (z.empty()) z = doc_string(doc, "z", "");
  QuantSliceOptions opt;
  opt.weight_min = wmin.value_or(0);
  opt.weight_max = wmax.value_or(opt.weight_min);
  opt.degree_cap = g.degree_cap.value_or(3);
  opt.laurent_bound = laurent;
  QElement tl = parse_q(A, t, "t");
  std::vector<QElement> zl;
  for (auto& s : split_list(z)) zl.push_back(parse_q(A, s, "z"));
  QuantSliceResult r = input_guard("slice", [&] { return quantized_slice(A, tl, zl, opt); });
  Json report = io::quant_slice_json(A, r);
  report["t"] = A.to_string(tl);
  return {report, r.lifts_ok && r.product_closed ? kOk : kFail};
}

Outcome quantize_axiom(const Globals& g, const std::string& input, bool localization) {
  io::HbarJob job = hbar_input(g, io::load_input(input));
  if (!job.classical) throw InputError("classical: no known classical limit; add a \"classical\" document");
  AxiomReport r = quantization_axiom_check(job.algebra, *job.classical);
  Json report = io::axiom_json(r);
  report["algebra"] = job.algebra.name;
  report["classical"] = job.classical->name;
  bool ok = r.pass;
  if (localization) {
    Sl2LocalizationReport l = verify_sl2_localization(job.algebra.order());
    report["sl2_localization"] = io::localization_json(l);
    ok = ok && l.pass;
  }
  return {report, ok ? kOk : kFail};
}

void emit(const Globals& g, const std::string& command, const Outcome& o, const std::function<std::string()>& text) {
  Json full;
  full["command"] = command;
  full["status"] = o.status == kOk ? "pass" : "fail";
  full["report"] = o.report;
  std::string body = g.pretty ? (text ? text() : io::render_text(full)) : full.dump(2) + "\n";
  if (g.output.empty()) {
    std::cout << body;
  } else {
    std::ofstream out(g.output, std::ios::binary);
    if (!out) throw InputError(g.output + ": cannot write output");
    out << body;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"equislice: graded Poisson structures, equivariant slices, quotients and quantizations"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  int order = 0, cap = 0;
  app.add_option("--order", order, "truncation order N")->check(CLI::Range(1, 64));
  app.add_option("--degree-cap", cap, "degree cap D")->check(CLI::Range(0, 64));
  auto* json_flag = app.add_flag("--json", g.json, "JSON output (default)");
  app.add_flag("--pretty", g.pretty, "human-readable rendering of the JSON report")->excludes(json_flag);
  app.add_option("--seed", g.seed, "seed for randomized fixtures");
  app.add_option("-o,--output", g.output, "write the report to a file");

  std::string input;
  std::function<Outcome()> job;
  std::function<std::string()> text;
  std::string command;

  auto group = [&](const std::string& name, const std::string& help) {
    auto* sc = app.add_subcommand(name, help);
    sc->require_subcommand(1);
    sc->fallthrough();
    return sc;
  };
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help, bool needs_input = true) {
    auto* sc = parent->add_subcommand(name, help);
    sc->fallthrough();
    if (needs_input) sc->add_option("input", input, "file, '-', inline JSON or @builtin")->required();
    return sc;
  };

  // poisson
  auto* poisson = group("poisson", "Poisson presentations");
  leaf(poisson, "jacobi", "certify the Jacobi identity")->callback([&] {
    command = "poisson jacobi";
    job = [&] { return poisson_jacobi(g, input); };
  });
  std::string weights;
  auto* deg = leaf(poisson, "degree", "homogeneity degree");
  deg->add_option("--weights", weights, "comma-separated weights overriding the presentation");
  deg->callback([&] {
    command = "poisson degree";
    job = [&] { return poisson_degree(g, input, weights); };
  });
  int wmin = 0, wmax = 0, laurent = 12;
  auto* center = leaf(poisson, "center", "Poisson center by weight");
  center->add_option("--weight-min", wmin);
  center->add_option("--weight-max", wmax);
  center->add_option("--laurent-bound", laurent)->check(CLI::Range(0, 64));
  center->callback([&] {
    command = "poisson center";
    job = [&] { return poisson_center(g, input, wmin, std::max(wmin, wmax), laurent); };
  });
  leaf(poisson, "hp0", "graded dimensions of HP_0")->callback([&] {
    command = "poisson hp0";
    job = [&] { return poisson_hp0(g, input); };
  });
  std::optional<int> target;
  int bound = 3;
  auto* grad = leaf(poisson, "gradings", "search for homogeneous gradings");
  grad->add_option("--target", target, "bracket degree (defaults to the declared degree)");
  grad->add_option("--bound", bound, "bound on |weight|")->check(CLI::Range(0, 8));
  grad->callback([&] {
    command = "poisson gradings";
    job = [&] { return poisson_gradings(g, input, target, bound); };
  });

  // darboux
  auto* darboux = group("darboux", "equivariant Darboux normalization");
  int rounds = 0;
  auto* norm = leaf(darboux, "normalize", "normalize to product form and emit a certificate");
  norm->add_option("--scramble", rounds, "apply this many random homogeneous changes first (uses --seed)")
      ->check(CLI::Range(0, 16));
  norm->callback([&] {
    command = "darboux normalize";
    job = [&] { return darboux_normalize(g, input, rounds); };
  });
  std::string leaf_vars;
  auto* dslice = leaf(darboux, "slice", "weight-zero centralizer of the leaf variables");
  dslice->add_option("--leaf", leaf_vars, "comma-separated leaf variables (default: the invertible one)");
  dslice->callback([&] {
    command = "darboux slice";
    job = [&] { return darboux_slice(g, input, leaf_vars); };
  });

  // hypertoric
  auto* hyper = group("hypertoric", "hypertoric cones");
  leaf(hyper, "unimodular", "check unimodularity via maximal minors")->callback([&] {
    command = "hypertoric unimodular";
    job = [&] { return hyper_unimodular(input); };
  });
  leaf(hyper, "leaves", "enumerate symplectic leaves")->callback([&] {
    command = "hypertoric leaves";
    job = [&] { return hyper_leaves(input); };
  });
  std::string flat, nonzero;
  for (const char* name : {"decompose", "verify"}) {
    const bool verify = std::string(name) == "verify";
    auto* sc = leaf(hyper, name, verify ? "decompose and verify symbolically" : "product decomposition at a point");
    sc->add_option("--flat", flat, "1-based coordinates of the leaf flat");
    sc->add_option("--nonzero", nonzero, "nonvanishing coordinates, e.g. x1,y3");
    sc->callback([&, verify] {
      command = verify ? "hypertoric verify" : "hypertoric decompose";
      job = [&, verify] { return hyper_decompose(g, input, flat, nonzero, verify); };
    });
  }

  // quotient
  auto* quotient = group("quotient", "finite symplectic quotients");
  leaf(quotient, "parabolics", "parabolic subgroups and leaves")->callback([&] {
    command = "quotient parabolics";
    job = [&] { return quotient_parabolics(input); };
  });
  leaf(quotient, "reflections", "symplectic reflections and omega_s")->callback([&] {
    command = "quotient reflections";
    job = [&] { return quotient_reflections(input); };
  });
  std::string point;
  auto* qslice = leaf(quotient, "slice", "leaf and slice data at a point");
  qslice->add_option("--point", point, "comma-separated integer coordinates");
  qslice->callback([&] {
    command = "quotient slice";
    job = [&] { return quotient_slice(input, point); };
  });
  leaf(quotient, "sra", "symplectic reflection algebra relations on basis pairs")->callback([&] {
    command = "quotient sra";
    job = [&] { return quotient_sra(input); };
  });

  // quantize
  auto* quantize = group("quantize", "graded hbar-algebras");
  leaf(quantize, "build", "build an algebra and check overlaps")->callback([&] {
    command = "quantize build";
    job = [&] { return quantize_build(g, input); };
  });
  std::vector<std::string> words;
  auto* nf = leaf(quantize, "normalform", "PBW normal forms of words");
  nf->add_option("--word", words, "word to rewrite (repeatable)");
  nf->callback([&] {
    command = "quantize normalform";
    job = [&] { return quantize_normalform(g, input, words); };
  });
  std::string element;
  auto* central = leaf(quantize, "central", "centrality check up to the degree cap");
  central->add_option("--element", element, "element text (default: the sl2 Casimir when applicable)");
  central->callback([&] {
    command = "quantize central";
    job = [&] { return quantize_central(g, input, element); };
  });
  std::string qt, qz;
  std::optional<int> qwmin, qwmax;
  int qlaurent = 6;
  auto* qs = leaf(quantize, "slice", "joint kernel of ad(t), ad(z) modulo hbar^N");
  qs->add_option("--t", qt, "lift of t (default: first invertible generator)");
  qs->add_option("--z", qz, "comma-separated lifts of the leaf coordinates");
  qs->add_option("--weight-min", qwmin);
  qs->add_option("--weight-max", qwmax);
  qs->add_option("--laurent-bound", qlaurent)->check(CLI::Range(0, 32));
  qs->callback([&] {
    command = "quantize slice";
    job = [&] { return quantize_slice(g, input, qt, qz, qwmin, qwmax, qlaurent); };
  });
  bool localization = false;
  auto* ax = leaf(quantize, "axiom", "compare hbar^-1 [a,b] mod hbar with the classical table");
  ax->add_flag("--sl2-localization", localization, "also verify the localized sl2 relations");
  ax->callback([&] {
    command = "quantize axiom";
    job = [&] { return quantize_axiom(g, input, localization); };
  });

  // selftest
  std::string corrupt;
  auto* st = app.add_subcommand("selftest", "run the fixture suite");
  st->fallthrough();
  st->add_option("--corrupt", corrupt, "alter one coefficient of the named fixture")->group("");
  st->callback([&] {
    command = "selftest";
    job = [&] {
      Json r = io::run_selftest(g.order.value_or(6), corrupt);
      return Outcome{r, r["pass"].get<bool>() ? kOk : kFail};
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }
  if (app.count("--order")) g.order = order;
  if (app.count("--degree-cap")) g.degree_cap = cap;
  if (const char* env = std::getenv("EQUISLICE_MAX_STEPS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v <= 0) {
      std::cerr << "input error: EQUISLICE_MAX_STEPS: expected a positive integer, got \"" << env << "\"\n";
      return kInput;
    }
  }

  try {
    Outcome o = job();
    if (command == "selftest") text = [&] { return io::render_matrix(o.report); };
    emit(g, command, o, text);
    return o.status;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const RewriteBudgetExceeded& e) {
    Outcome o{Json{{"error", std::string("rewrite budget exceeded: ") + e.what()}}, kFail};
    emit(g, command, o, nullptr);
    return kFail;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << command << ": " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << command << ": " << e.what() << "\n";
    return kInput;
  }
}
