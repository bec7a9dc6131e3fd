#include "equislice_io.hpp"

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "equislice/fixtures.hpp"

namespace equislice::io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
  throw InputError((where.empty() ? std::string("/") : where) + ": " + msg);
}

std::string at(const std::string& where, const std::string& key) { return where + "/" + key; }
std::string at(const std::string& where, size_t i) { return where + "/" + std::to_string(i); }

const Json& need(const Json& doc, const std::string& key, const std::string& where) {
  if (!doc.is_object()) fail(where, "expected an object");
  auto it = doc.find(key);
  if (it == doc.end()) fail(where, "missing field \"" + key + "\"");
  return *it;
}

long get_int(const Json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(where, "expected an integer");
  return v.get<long>();
}

int get_small(const Json& v, const std::string& where, long lo, long hi) {
  long x = get_int(v, where);
  if (x < lo || x > hi) fail(where, "value " + std::to_string(x) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(x);
}

std::string get_string(const Json& v, const std::string& where) {
  if (!v.is_string()) fail(where, "expected a string");
  return v.get<std::string>();
}

const Json& get_array(const Json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected an array");
  return v;
}

std::vector<std::string> string_list(const Json& v, const std::string& where) {
  std::vector<std::string> out;
  for (size_t i = 0; i < get_array(v, where).size(); ++i) out.push_back(get_string(v[i], at(where, i)));
  return out;
}

int opt_int(const Json& doc, const std::string& key, int fallback, const std::string& where, long lo = -1000,
            long hi = 1000) {
  if (!doc.is_object() || !doc.contains(key)) return fallback;
  return get_small(doc[key], at(where, key), lo, hi);
}

// Flags given either as a list of names or as booleans parallel to `names`.
std::vector<bool> flag_list(const Json& doc, const std::string& key, const std::vector<std::string>& names,
                            const std::string& where) {
  std::vector<bool> out(names.size(), false);
  if (!doc.contains(key)) return out;
  const std::string w = at(where, key);
  const Json& v = get_array(doc[key], w);
  if (!v.empty() && v[0].is_boolean()) {
    if (v.size() != names.size()) fail(w, "expected " + std::to_string(names.size()) + " flags");
    for (size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_boolean()) fail(at(w, i), "expected a boolean");
      out[i] = v[i].get<bool>();
    }
    return out;
  }
  for (size_t i = 0; i < v.size(); ++i) {
    std::string n = get_string(v[i], at(w, i));
    auto it = std::find(names.begin(), names.end(), n);
    if (it == names.end()) fail(at(w, i), "unknown variable \"" + n + "\"");
    out[it - names.begin()] = true;
  }
  return out;
}

template <class F>
auto guarded(const std::string& where, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const InputError&) {
    throw;
  } catch (const RewriteBudgetExceeded&) {
    throw;
  } catch (const std::exception& e) {
    fail(where, e.what());
  }
}

std::vector<int> parse_int_args(const std::string& args, const std::string& where) {
  std::vector<int> out;
  if (args.empty()) return out;
  std::stringstream ss(args);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      fail(where, "bad integer argument \"" + item + "\"");
    }
  }
  return out;
}

Json zeta_entry(int n, int power) {
  power = ((power % n) + n) % n;
  Json c = Json::array();
  for (int i = 0; i <= power; ++i) c.push_back(i == power ? 1 : 0);
  return c;
}

Json builtin_single(const std::string& spec) {
  const std::string where = "@" + spec;
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::vector<int> a = parse_int_args(colon == std::string::npos ? "" : spec.substr(colon + 1), where);
  auto arg = [&](size_t i, int fallback) { return i < a.size() ? a[i] : fallback; };
  auto arity = [&](size_t lo, size_t hi) {
    if (a.size() < lo || a.size() > hi) fail(where, "wrong number of arguments");
  };

  if (name == "sl2" || name == "counterex1" || name == "counterex2" || name == "cyclic") {
    arity(0, 0);
    return Json{{"fixture", name}};
  }
  if (name == "kleinian" || name == "kleinian-slice") {
    arity(1, 1);
    return Json{{"fixture", name}, {"n", a[0]}};
  }
  if (name == "standard") {
    arity(2, 3);
    return Json{{"standard", Json{{"n", a[0]}, {"k", a[1]}, {"ell", arg(2, 1)}}}};
  }
  if (name == "hyper-pair") {
    arity(0, 0);
    return Json{{"matrix", Json::array({Json::array({1}), Json::array({1})})}};
  }
  if (name == "hyper-4x2") {
    arity(0, 0);
    return Json{{"matrix", Json::array({Json::array({1, 0}), Json::array({1, 0}), Json::array({0, 1}),
                                        Json::array({0, 1})})},
                {"flat", Json::array({1, 2})},
                {"nonzero", "x3"}};
  }
  if (name == "zn") {
    arity(1, 1);
    int n = a[0];
    if (n < 1) fail(where, "n must be positive");
    Json g = Json::array({Json::array({zeta_entry(n, 1), 0}), Json::array({0, zeta_entry(n, -1)})});
    return Json{{"cyclotomic_order", n}, {"generators", Json::array({g})}, {"point", Json::array({1, 0})}};
  }
  if (name == "binary-dihedral") {
    arity(1, 1);
    int n = a[0];
    if (n < 1) fail(where, "n must be positive");
    Json r = Json::array({Json::array({zeta_entry(2 * n, 1), 0}), Json::array({0, zeta_entry(2 * n, -1)})});
    Json s = Json::array({Json::array({0, -1}), Json::array({1, 0})});
    return Json{{"cyclotomic_order", 2 * n}, {"generators", Json::array({r, s})}, {"point", Json::array({1, 0})}};
  }
  if (name == "klein4") {
    arity(0, 0);
    auto diag = [](int a0, int a1) {
      Json m = Json::array();
      for (int i = 0; i < 4; ++i) {
        Json row = Json::array();
        for (int j = 0; j < 4; ++j) row.push_back(i == j ? (i < 2 ? a0 : a1) : 0);
        m.push_back(row);
      }
      return m;
    };
    return Json{{"cyclotomic_order", 1},
                {"generators", Json::array({diag(-1, 1), diag(1, -1)})},
                {"point", Json::array({1, 0, 0, 0})}};
  }
  if (name == "D" || name == "weyl") {
    arity(2, 2);
    return Json{{"family", name}, {"n", a[0]}, {"k", a[1]}};
  }
  if (name == "sl2q") {
    arity(0, 0);
    return Json{{"family", "enveloping"}, {"algebra", "sl2"}};
  }
  if (name == "sl2q-f") {
    arity(0, 0);
    return Json{{"family", "enveloping"}, {"algebra", "sl2"}, {"inverted", Json::array({"f"})}};
  }
  fail(where, "unknown builtin \"" + name + "\"");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

Scalar scalar_from_json(const Json& v, int N, const std::string& where) {
  if (v.is_number_integer()) return Scalar(v.get<long>());
  if (v.is_string()) return guarded(where, [&] { return Scalar::parse_rational(v.get<std::string>()); });
  if (v.is_array()) {
    std::vector<mpq_class> c;
    for (size_t i = 0; i < v.size(); ++i) c.push_back(scalar_from_json(v[i], 1, at(where, i)).rational());
    if (c.size() > static_cast<size_t>(std::max(N, 1))) fail(where, "more coefficients than the cyclotomic order");
    return guarded(where, [&] { return Scalar::cyclotomic(N, c); });
  }
  fail(where, "expected an integer, a rational string or a coefficient array");
}

ExactMatrix matrix_from_json(const Json& v, int N, const std::string& where) {
  std::vector<std::vector<Scalar>> rows;
  for (size_t i = 0; i < get_array(v, where).size(); ++i) {
    const std::string w = at(where, i);
    std::vector<Scalar> row;
    for (size_t j = 0; j < get_array(v[i], w).size(); ++j) row.push_back(scalar_from_json(v[i][j], N, at(w, j)));
    if (!rows.empty() && row.size() != rows[0].size()) fail(w, "ragged matrix");
    rows.push_back(std::move(row));
  }
  if (rows.empty() || rows.size() != rows[0].size()) fail(where, "expected a nonempty square matrix");
  return ExactMatrix(rows);
}

Json matrix_json(const ExactMatrix& m) {
  Json out = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j).to_string());
    out.push_back(row);
  }
  return out;
}

Json int_matrix_json(const IntMatrix& m) { return Json(m.to_rows()); }

Json one_based(const std::vector<int>& v) {
  Json out = Json::array();
  for (int x : v) out.push_back(x + 1);
  return out;
}

StructureConstants structure_from_json(const Json& doc, const std::string& where) {
  StructureConstants sc;
  sc.names = string_list(need(doc, "generators", where), at(where, "generators"));
  const int n = static_cast<int>(sc.names.size());
  ContextPtr ctx = guarded(where, [&] {
    return make_context(sc.names, std::vector<int>(n, 1), std::vector<bool>(n, false), std::vector<bool>(n, false), 3);
  });
  const std::string bw = at(where, "brackets");
  const Json& br = get_array(need(doc, "brackets", where), bw);
  for (size_t r = 0; r < br.size(); ++r) {
    const std::string w = at(bw, r);
    if (!br[r].is_array() || br[r].size() != 3) fail(w, "expected [a, b, expr]");
    int a = ctx->index(get_string(br[r][0], at(w, 0)));
    int b = ctx->index(get_string(br[r][1], at(w, 1)));
    if (a < 0 || b < 0 || a == b) fail(w, "bad generator pair");
    TruncatedElement v = guarded(at(w, 2), [&] { return parse_element(ctx, get_string(br[r][2], at(w, 2))); });
    std::vector<std::pair<int, Scalar>> lin;
    for (auto& t : v.terms()) {
      int deg = 0, var = -1;
      for (int i = 0; i < n; ++i)
        if (t.mono[i] != 0) {
          deg += t.mono[i];
          var = i;
        }
      if (deg != 1 || t.mono[var] != 1) fail(at(w, 2), "structure constants must be linear");
      lin.emplace_back(var, a < b ? t.coef : -t.coef);
    }
    sc.brackets[{std::min(a, b), std::max(a, b)}] = lin;
  }
  return sc;
}

Json elements_json(const std::vector<TruncatedElement>& v) {
  Json out = Json::array();
  for (auto& e : v) out.push_back(e.to_string());
  return out;
}

void render(const Json& j, int indent, std::string& out);

bool is_flat(const Json& j) {
  if (!j.is_array()) return !j.is_object();
  for (auto& e : j)
    if (e.is_object() || (e.is_array() && !is_flat(e))) return false;
  return true;
}

std::string flat_text(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_array()) {
    std::string s = "[";
    for (size_t i = 0; i < j.size(); ++i) s += (i ? ", " : "") + flat_text(j[i]);
    return s + "]";
  }
  return j.dump();
}

void render(const Json& j, int indent, std::string& out) {
  const std::string pad(indent, ' ');
  if (j.is_object()) {
    for (auto& [k, v] : j.items()) {
      if (is_flat(v)) {
        out += pad + k + ": " + flat_text(v) + "\n";
      } else {
        out += pad + k + ":\n";
        render(v, indent + 2, out);
      }
    }
  } else if (j.is_array()) {
    for (auto& e : j) {
      if (is_flat(e)) {
        out += pad + "- " + flat_text(e) + "\n";
      } else {
        out += pad + "-\n";
        render(e, indent + 2, out);
      }
    }
  } else {
    out += pad + flat_text(j) + "\n";
  }
}

}  // namespace

Json builtin_document(const std::string& spec) {
  if (spec.find('*') != std::string::npos) {
    Json factors = Json::array();
    for (auto& s : split(spec, '*')) factors.push_back(builtin_single(s));
    return Json{{"family", "tensor"}, {"factors", factors}};
  }
  if (spec.find('+') != std::string::npos) {
    Json parts = Json::array();
    for (auto& s : split(spec, '+')) parts.push_back(builtin_single(s));
    return Json{{"product", parts}};
  }
  return builtin_single(spec);
}

Json load_input(const std::string& arg) {
  if (arg.empty()) fail("input", "empty input argument");
  if (arg[0] == '@') return builtin_document(arg.substr(1));
  std::string text;
  std::string where = arg;
  if (arg == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
    where = "stdin";
  } else if (arg[0] == '{' || arg[0] == '[') {
    text = arg;
    where = "argument";
  } else {
    std::ifstream in(arg, std::ios::binary);
    if (!in) fail(arg, "cannot open file");
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(where + ": byte " + std::to_string(e.byte) + ": malformed JSON");
  }
  if (doc.is_array()) return Json{{"matrix", doc}};
  return doc;
}

PoissonPresentation presentation_from_json(const Json& doc, std::optional<int> order, const std::string& where) {
  if (!doc.is_object()) fail(where, "expected a presentation object");
  const int N = order.value_or(opt_int(doc, "order", 6, where, 1, 64));
  if (doc.contains("fixture")) {
    const std::string f = get_string(doc["fixture"], at(where, "fixture"));
    const int n = opt_int(doc, "n", 2, where, 1, 12);
    if (f == "sl2") return sl2_presentation(N);
    if (f == "counterex1") return counterex1_presentation(N);
    if (f == "counterex2") return counterex2_presentation(N);
    if (f == "cyclic") return cyclic_presentation(N);
    if (f == "kleinian") return kleinian_presentation(n, N);
    if (f == "kleinian-slice") return kleinian_slice(n, N);
    fail(at(where, "fixture"), "unknown fixture \"" + f + "\"");
  }
  if (doc.contains("standard")) {
    const std::string w = at(where, "standard");
    const Json& s = doc["standard"];
    const int n = get_small(need(s, "n", w), at(w, "n"), 1, 8);
    const int k = get_small(need(s, "k", w), at(w, "k"), -8, 8);
    const int ell = opt_int(s, "ell", 1, w, 1, 12);
    PoissonPresentation P = guarded(w, [&] { return standard_presentation(n, k, ell, N); });
    if (doc.contains("slice")) {
      PoissonPresentation S = presentation_from_json(doc["slice"], N, at(where, "slice"));
      P = guarded(where, [&] { return product_presentation(P, S); });
    }
    return P;
  }
  if (doc.contains("product")) {
    const std::string w = at(where, "product");
    const Json& parts = get_array(doc["product"], w);
    if (parts.empty()) fail(w, "empty product");
    PoissonPresentation P = presentation_from_json(parts[0], N, at(w, size_t{0}));
    for (size_t i = 1; i < parts.size(); ++i) {
      PoissonPresentation S = presentation_from_json(parts[i], N, at(w, i));
      P = guarded(at(w, i), [&] { return product_presentation(P, S); });
    }
    return P;
  }

  const std::vector<std::string> names = string_list(need(doc, "variables", where), at(where, "variables"));
  if (names.empty()) fail(at(where, "variables"), "no variables");
  std::vector<int> weights(names.size(), 1);
  if (doc.contains("weights")) {
    const std::string w = at(where, "weights");
    const Json& v = get_array(doc["weights"], w);
    if (v.size() != names.size()) fail(w, "expected " + std::to_string(names.size()) + " weights");
    for (size_t i = 0; i < v.size(); ++i) weights[i] = get_small(v[i], at(w, i), -1000, 1000);
  }
  std::vector<bool> inv = flag_list(doc, "invertible", names, where);
  std::vector<bool> filt = flag_list(doc, "filtration", names, where);
  ContextPtr ctx = guarded(where, [&] { return make_context(names, weights, inv, filt, N); });
  PoissonPresentation P(ctx);
  if (doc.contains("brackets")) {
    const std::string bw = at(where, "brackets");
    const Json& br = get_array(doc["brackets"], bw);
    for (size_t r = 0; r < br.size(); ++r) {
      const std::string w = at(bw, r);
      if (!br[r].is_array() || br[r].size() != 3) fail(w, "expected [a, b, expr]");
      std::string a = get_string(br[r][0], at(w, 0)), b = get_string(br[r][1], at(w, 1));
      if (ctx->index(a) < 0) fail(at(w, 0), "unknown variable \"" + a + "\"");
      if (ctx->index(b) < 0) fail(at(w, 1), "unknown variable \"" + b + "\"");
      if (a == b) fail(w, "bracket of a variable with itself");
      std::string expr = get_string(br[r][2], at(w, 2));
      guarded(at(w, 2), [&] {
        P.set(a, b, expr);
        return 0;
      });
    }
  }
  if (doc.contains("relations")) {
    const std::string rw = at(where, "relations");
    const Json& rel = get_array(doc["relations"], rw);
    for (size_t r = 0; r < rel.size(); ++r) {
      std::string text = get_string(rel[r], at(rw, r));
      guarded(at(rw, r), [&] {
        P.add_relation(P.parse(text));
        return 0;
      });
    }
  }
  if (doc.contains("declared_degree") && !doc["declared_degree"].is_null())
    P.declared_degree = get_small(doc["declared_degree"], at(where, "declared_degree"), -1000, 1000);
  P.name = doc.contains("name") ? get_string(doc["name"], at(where, "name")) : "input";
  return P;
}

Json presentation_to_json(const PoissonPresentation& P) {
  const GradedContext& c = *P.context();
  Json out;
  out["name"] = P.name;
  out["variables"] = c.names;
  out["weights"] = c.weights;
  Json inv = Json::array(), filt = Json::array();
  for (int i = 0; i < c.size(); ++i) {
    if (c.invertible[i]) inv.push_back(c.names[i]);
    if (c.filtration[i]) filt.push_back(c.names[i]);
  }
  out["invertible"] = inv;
  out["filtration"] = filt;
  out["order"] = c.order;
  Json br = Json::array();
  for (int i = 0; i < c.size(); ++i)
    for (int j = i + 1; j < c.size(); ++j)
      if (!P.entry(i, j).is_zero()) br.push_back(Json::array({c.names[i], c.names[j], P.entry(i, j).to_string()}));
  out["brackets"] = br;
  Json rel = Json::array();
  for (auto& r : P.relations()) rel.push_back(r.poly.to_string());
  out["relations"] = rel;
  out["declared_degree"] = P.declared_degree ? Json(*P.declared_degree) : Json(nullptr);
  return out;
}

TorusActionMatrix torus_from_json(const Json& doc, const std::string& where) {
  const std::string w = at(where, "matrix");
  const Json& m = get_array(need(doc, "matrix", where), w);
  std::vector<std::vector<long>> rows;
  for (size_t i = 0; i < m.size(); ++i) {
    std::vector<long> row;
    for (size_t j = 0; j < get_array(m[i], at(w, i)).size(); ++j) row.push_back(get_small(m[i][j], at(at(w, i), j), -1000, 1000));
    if (!rows.empty() && row.size() != rows[0].size()) fail(at(w, i), "ragged matrix");
    rows.push_back(std::move(row));
  }
  if (rows.empty() || rows[0].empty()) fail(w, "empty matrix");
  if (rows.size() > 16) fail(w, "at most 16 rows are supported");
  TorusActionMatrix A{IntMatrix(rows)};
  guarded(w, [&] {
    A.validate();
    return 0;
  });
  return A;
}

GroupData group_from_json(const Json& doc, const std::string& where) {
  const int N = opt_int(doc, "cyclotomic_order", 1, where, 1, 120);
  const std::string gw = at(where, "generators");
  const Json& gens = get_array(need(doc, "generators", where), gw);
  if (gens.empty()) fail(gw, "no generators");
  std::vector<ExactMatrix> mats;
  for (size_t i = 0; i < gens.size(); ++i) {
    mats.push_back(matrix_from_json(gens[i], N, at(gw, i)));
    if (mats.back().rows() != mats[0].rows()) fail(at(gw, i), "generators of different sizes");
  }
  const int dim = mats[0].rows();
  if (dim % 2) fail(gw, "dimension must be even");
  ExactMatrix omega = doc.contains("omega") ? matrix_from_json(doc["omega"], N, at(where, "omega")) : standard_symplectic_form(dim);
  if (omega.rows() != dim) fail(at(where, "omega"), "size does not match the generators");
  GroupData G = guarded(where, [&] { return close_group(mats, omega); });
  G.cyclotomic_order = std::max(G.cyclotomic_order, N);
  return G;
}

std::vector<Scalar> vector_from_json(const Json& v, int N, const std::string& where) {
  std::vector<Scalar> out;
  for (size_t i = 0; i < get_array(v, where).size(); ++i) out.push_back(scalar_from_json(v[i], N, at(where, i)));
  return out;
}

Json scalar_vector_json(const std::vector<Scalar>& v) {
  Json out = Json::array();
  for (auto& s : v) out.push_back(s.to_string());
  return out;
}

HbarJob hbar_from_json(const Json& doc, std::optional<int> order, const std::string& where) {
  if (!doc.is_object()) fail(where, "expected an algebra object");
  const int N = order.value_or(opt_int(doc, "order", 3, where, 1, 32));
  HbarJob job;
  const std::string family = doc.contains("family") ? get_string(doc["family"], at(where, "family")) : "explicit";
  if (family == "D" || family == "weyl") {
    const int n = get_small(need(doc, "n", where), at(where, "n"), 1, 8);
    const int k = get_small(need(doc, "k", where), at(where, "k"), -8, 8);
    if (family == "D") {
      job.algebra = guarded(where, [&] { return build_d(n, k, N); });
      job.classical = standard_presentation(n, k, 1);
    } else {
      job.algebra = guarded(where, [&] { return build_weyl(n, k, N); });
    }
  } else if (family == "enveloping") {
    StructureConstants sc;
    bool is_sl2 = false;
    if (doc.contains("algebra")) {
      std::string a = get_string(doc["algebra"], at(where, "algebra"));
      if (a != "sl2") fail(at(where, "algebra"), "unknown algebra \"" + a + "\"");
      sc = sl2_structure_constants();
      is_sl2 = true;
    } else {
      sc = structure_from_json(need(doc, "structure", where), at(where, "structure"));
    }
    std::vector<std::string> inverted;
    if (doc.contains("inverted")) inverted = string_list(doc["inverted"], at(where, "inverted"));
    job.algebra = guarded(where, [&] { return build_enveloping(sc, N, inverted); });
    if (is_sl2 && inverted.empty()) job.classical = sl2_presentation();
  } else if (family == "tensor") {
    const std::string fw = at(where, "factors");
    const Json& f = get_array(need(doc, "factors", where), fw);
    if (f.empty()) fail(fw, "no factors");
    job = hbar_from_json(f[0], N, at(fw, size_t{0}));
    for (size_t i = 1; i < f.size(); ++i) {
      HbarJob b = hbar_from_json(f[i], N, at(fw, i));
      job.algebra = guarded(at(fw, i), [&] { return tensor(job.algebra, b.algebra); });
      if (job.classical && b.classical)
        job.classical = guarded(at(fw, i), [&] { return product_presentation(*job.classical, *b.classical); });
      else
        job.classical.reset();
    }
  } else if (family == "explicit") {
    const std::vector<std::string> names = string_list(need(doc, "generators", where), at(where, "generators"));
    if (names.empty()) fail(at(where, "generators"), "no generators");
    std::vector<int> weights(names.size(), 1);
    if (doc.contains("weights")) {
      const std::string w = at(where, "weights");
      const Json& v = get_array(doc["weights"], w);
      if (v.size() != names.size()) fail(w, "expected " + std::to_string(names.size()) + " weights");
      for (size_t i = 0; i < v.size(); ++i) weights[i] = get_small(v[i], at(w, i), -1000, 1000);
    }
    std::vector<bool> inv = flag_list(doc, "invertible", names, where);
    const int hw = opt_int(doc, "hbar_weight", 1, where);
    HbarPresentation A = guarded(where, [&] { return HbarPresentation(names, weights, inv, hw, N); });
    if (doc.contains("commutators")) {
      const std::string cw = at(where, "commutators");
      const Json& cs = get_array(doc["commutators"], cw);
      for (size_t r = 0; r < cs.size(); ++r) {
        const std::string w = at(cw, r);
        if (!cs[r].is_array() || cs[r].size() != 3) fail(w, "expected [a, b, expr]");
        int a = A.index(get_string(cs[r][0], at(w, 0)));
        int b = A.index(get_string(cs[r][1], at(w, 1)));
        if (a < 0 || b < 0 || a == b) fail(w, "bad generator pair");
        QElement c = guarded(at(w, 2), [&] { return A.parse(get_string(cs[r][2], at(w, 2))); });
        if (a < b) {
          std::swap(a, b);
          c = A.scale(c, Scalar(-1));
        }
        guarded(w, [&] {
          A.set_commutator(a, b, c);
          return 0;
        });
      }
    }
    A.name = doc.contains("name") ? get_string(doc["name"], at(where, "name")) : "input";
    job.algebra = std::move(A);
  } else {
    fail(at(where, "family"), "unknown family \"" + family + "\"");
  }
  if (doc.contains("classical")) job.classical = presentation_from_json(doc["classical"], std::nullopt, at(where, "classical"));
  return job;
}

Json hbar_to_json(const HbarPresentation& A) {
  Json out;
  out["name"] = A.name;
  out["generators"] = A.names();
  out["weights"] = A.weights();
  Json inv = Json::array();
  for (int i = 0; i < A.size(); ++i)
    if (A.invertible()[i]) inv.push_back(A.names()[i]);
  out["invertible"] = inv;
  out["hbar_weight"] = A.hbar_weight();
  out["order"] = A.order();
  Json cs = Json::array();
  for (int j = 0; j < A.size(); ++j)
    for (int i = 0; i < j; ++i)
      if (!A.commutator_rule(j, i).empty())
        cs.push_back(Json::array({A.names()[j], A.names()[i], A.to_string(A.commutator_rule(j, i))}));
  out["commutators"] = cs;
  return out;
}

Json jacobi_json(const PoissonPresentation& P, const JacobiReport& r) {
  const auto& n = P.context()->names;
  Json v = Json::array();
  for (auto& x : r.violations)
    v.push_back(Json{{"triple", Json::array({n[x.i], n[x.j], n[x.k]})}, {"residue", x.residue.to_string()}});
  return Json{{"pass", r.pass}, {"precision", r.precision}, {"violations", v}};
}

Json homogeneity_json(const HomogeneityResult& r) {
  return Json{{"homogeneous", r.degree.has_value()},
              {"degree", r.degree ? Json(*r.degree) : Json(nullptr)},
              {"offending", r.offending}};
}

Json center_json(const std::vector<CenterBlock>& blocks) {
  Json out = Json::array();
  for (auto& b : blocks) out.push_back(Json{{"weight", b.weight}, {"dimension", b.basis.size()}, {"basis", elements_json(b.basis)}});
  return out;
}

Json hp0_json(const GradedDimTable& t) {
  Json dims = Json::array();
  for (auto& [w, d] : t.dims) dims.push_back(Json::array({w, d}));
  return Json{{"bracket_degree", t.bracket_degree},
              {"dimensions", dims},
              {"stable_from", t.stable_from ? Json(*t.stable_from) : Json(nullptr)}};
}

Json slice_json(const SliceResult& s) {
  Json gens = Json::array();
  const auto& names = s.slice.context() ? s.slice.context()->names : std::vector<std::string>{};
  for (size_t i = 0; i < s.generators.size(); ++i)
    gens.push_back(Json{{"name", i < names.size() ? names[i] : ""},
                        {"element", s.generators[i].to_string()},
                        {"weight", i < s.natural_weights.size() ? s.natural_weights[i] : 0}});
  Json out;
  out["generators"] = gens;
  out["presentation"] = s.slice.context() ? presentation_to_json(s.slice) : Json(nullptr);
  out["unexpressed"] = s.unexpressed;
  return out;
}

Json certificate_json(const DecompositionCertificate& c) {
  const auto& n = c.base.context()->names;
  Json out;
  out["base"] = c.base.name;
  out["order"] = c.order;
  out["form"] = c.form;
  out["ell"] = c.ell;
  out["k"] = c.k;
  out["t"] = c.t >= 0 ? Json(n[c.t]) : Json(nullptr);
  out["u"] = c.u >= 0 ? Json(n[c.u]) : Json(nullptr);
  Json pairs = Json::array();
  for (auto& [a, b] : c.z_pairs) pairs.push_back(Json::array({n[a], n[b]}));
  out["z_pairs"] = pairs;
  Json sv = Json::array();
  for (int v : c.slice_vars) sv.push_back(n[v]);
  out["slice_vars"] = sv;
  Json stages = Json::array();
  for (auto& s : c.stages) stages.push_back(Json{{"name", s.name}, {"iterations", s.iterations}, {"identity", s.identity}});
  out["stages"] = stages;
  Json coords;
  for (size_t i = 0; i < c.coordinates.size() && i < n.size(); ++i) coords[n[i]] = c.coordinates[i].to_string();
  out["substitutions"] = coords.is_null() ? Json::object() : coords;
  out["result"] = presentation_to_json(c.result);
  Json xi = Json::array();
  for (auto& x : c.xi) xi.push_back(x.to_string());
  out["xi"] = xi;
  bool xi_zero = true;
  for (auto& x : c.xi) xi_zero = xi_zero && x.is_zero();
  out["xi_zero"] = xi_zero;
  out["leaf_block_standard"] = c.leaf_block_standard;
  out["couplings_vanish"] = c.couplings_vanish;
  out["product"] = c.product;
  out["slice"] = slice_json(c.slice);
  return out;
}

Json unimodular_json(const UnimodularityResult& r) {
  return Json{{"unimodular", r.unimodular},
              {"witness", r.witness ? Json(*r.witness) : Json(nullptr)},
              {"witness_rows", one_based(r.witness_rows)}};
}

Json leaf_json(const LeafDescriptor& l) {
  return Json{{"F", one_based(l.F)},
              {"leaf_dim", l.leaf_dim},
              {"is_vertex", l.is_vertex},
              {"subtorus_lattice", int_matrix_json(l.subtorus_lattice)}};
}

Json decomposition_json(const TorusActionMatrix&, const DecompositionReport& r) {
  Json out;
  out["leaf"] = leaf_json(r.leaf);
  Json g = Json::array();
  for (size_t q = 0; q < r.G.size(); ++q)
    g.push_back((r.swapped[q] ? "y" : "x") + std::to_string(r.G[q] + 1));
  out["G"] = g;
  out["rest"] = one_based(r.rest);
  out["r"] = r.r;
  Json w = Json::array();
  bool sums_two = true;
  for (size_t i = 0; i < r.rest.size(); ++i) {
    w.push_back(Json{{"index", r.rest[i] + 1}, {"x", r.weight_x[i]}, {"y", r.weight_y[i]}});
    sums_two = sums_two && r.weight_x[i] + r.weight_y[i] == 2;
  }
  out["weights"] = w;
  out["weights_sum_two"] = sums_two;
  out["dual"] = int_matrix_json(r.dual);
  out["slice_matrix"] = int_matrix_json(r.slice);
  out["hyperplanes"] = r.hyperplanes;
  out["ell"] = r.ell;
  out["twisted"] = r.twisted;
  return out;
}

Json verification_json(const HypertoricVerification& v) {
  Json f = Json::array();
  for (auto& c : v.failures) f.push_back(Json{{"check", c.what}, {"residue", c.residue.to_string()}});
  return Json{{"pass", v.pass}, {"failures", f}};
}

Json group_json(const GroupData& G) {
  Json classes = Json::array();
  for (auto& c : G.classes) {
    Json labels = Json::array();
    for (int g : c) labels.push_back(G.label(g));
    classes.push_back(labels);
  }
  return Json{{"dim", G.dim}, {"order", G.order()}, {"cyclotomic_order", G.cyclotomic_order}, {"classes", classes}};
}

Json parabolic_json(const GroupData& G, const ParabolicRecord& p) {
  Json sub = Json::array();
  for (int g : p.subgroup) sub.push_back(G.label(g));
  Json fixed = Json::array(), perp = Json::array();
  for (auto& v : p.fixed_basis) fixed.push_back(scalar_vector_json(v));
  for (auto& v : p.perp_basis) perp.push_back(scalar_vector_json(v));
  return Json{{"subgroup", sub},
              {"order", p.subgroup.size()},
              {"leaf_dim", p.leaf_dim},
              {"fixed_basis", fixed},
              {"perp_basis", perp},
              {"normalizer_order", p.normalizer.size()},
              {"residual_order", p.residual_order}};
}

Json reflections_json(const GroupData& G, const SRAData& s) {
  Json refl = Json::array();
  for (size_t i = 0; i < s.reflections.size(); ++i)
    refl.push_back(Json{{"element", G.label(s.reflections[i])},
                        {"matrix", matrix_json(G.elements[s.reflections[i]])},
                        {"class", s.class_index[i] + 1},
                        {"omega_s", matrix_json(s.omega_s[i])}});
  Json classes = Json::array();
  for (auto& c : s.classes) {
    Json labels = Json::array();
    for (int g : c) labels.push_back(G.label(g));
    classes.push_back(labels);
  }
  return Json{{"count", s.reflections.size()}, {"classes", classes}, {"reflections", refl}};
}

Json leaf_slice_json(const LeafSliceSummary& s) {
  Json basis = Json::array();
  for (auto& v : s.leaf_basis) basis.push_back(scalar_vector_json(v));
  Json group = Json::array();
  for (auto& m : s.slice_group) group.push_back(matrix_json(m));
  return Json{{"leaf_dim", s.leaf_dim},
              {"leaf_basis", basis},
              {"slice_dim", s.slice_dim},
              {"slice_group", group},
              {"slice_group_closed", s.slice_group_closed},
              {"residual_order", s.residual_order},
              {"minus_id_in_residual", s.minus_id_in_residual},
              {"ell", s.ell},
              {"stabilizer_order", s.stabilizer_order}};
}

Json qelement_json(const HbarPresentation& A, const QElement& a) { return A.to_string(a); }

Json centrality_json(const HbarPresentation& A, const CentralityResult& r) {
  Json res = Json::array();
  for (auto& [probe, c] : r.residues) res.push_back(Json{{"probe", probe}, {"commutator", A.to_string(c)}});
  return Json{{"central", r.pass}, {"residues", res}};
}

Json quant_slice_json(const HbarPresentation& A, const QuantSliceResult& r) {
  Json blocks = Json::array();
  for (auto& b : r.blocks) {
    Json basis = Json::array();
    for (auto& e : b.basis) basis.push_back(A.to_string(e));
    blocks.push_back(Json{{"weight", b.weight}, {"dimension", b.basis.size()}, {"basis", basis}});
  }
  Json gens = Json::array();
  for (auto& g : r.generators) gens.push_back(A.to_string(g));
  return Json{{"lifts_ok", r.lifts_ok},
              {"lift_failures", r.lift_failures},
              {"blocks", blocks},
              {"generators", gens},
              {"product_closed", r.product_closed}};
}

Json axiom_json(const AxiomReport& r) {
  Json f = Json::array();
  for (auto& x : r.failures)
    f.push_back(Json{{"pair", Json::array({x.a, x.b})}, {"expected", x.expected.to_string()}, {"found", x.found.to_string()}});
  return Json{{"pass", r.pass}, {"shape_errors", r.shape_errors}, {"failures", f}};
}

Json localization_json(const Sl2LocalizationReport& r) {
  HbarPresentation A = build_enveloping(sl2_structure_constants(), 3, {"f"});
  return Json{{"pass", r.pass},
              {"xy_residue", A.to_string(r.xy_residue)},
              {"commutator_c_x", A.to_string(r.cx)},
              {"commutator_c_y", A.to_string(r.cy)},
              {"weight_x", r.weight_x},
              {"weight_y", r.weight_y},
              {"weight_c", r.weight_c},
              {"weight_hbar", r.weight_hbar}};
}

std::string render_text(const Json& report) {
  std::string out;
  render(report, 0, out);
  return out;
}

}  // namespace equislice::io
