#include "selftest.hpp"

#include <algorithm>
#include <functional>
#include <utility>

#include "equislice/fixtures.hpp"

namespace equislice::io {

namespace {

using Check = std::pair<std::string, std::function<bool()>>;

// Exceptions inside a check count as failures of that check.
Json run_checks(const std::vector<Check>& checks) {
  Json out;
  for (auto& [name, f] : checks) {
    bool ok = false;
    try {
      ok = f();
    } catch (const std::exception&) {
      ok = false;
    }
    out[name] = ok;
  }
  return out;
}

PoissonPresentation maybe_corrupt(PoissonPresentation P, bool corrupt, const std::string& a, const std::string& b,
                                  const std::string& expr) {
  if (corrupt) P.set(a, b, expr);
  return P;
}

bool xi_zero(const DecompositionCertificate& c) {
  return std::all_of(c.xi.begin(), c.xi.end(), [](const TruncatedElement& x) { return x.is_zero(); });
}

Json sl2_row(int order, bool corrupt) {
  PoissonPresentation P = maybe_corrupt(sl2_presentation(order), corrupt, "e", "f", "2*h");
  return run_checks({
      {"jacobi", [&] { return check_jacobi(P).pass; }},
      {"degree", [&] { return homogeneity_degree(P, P.context()->weights).degree == -1; }},
      {"center",
       [&] {
         auto blocks = poisson_center_basis(P, 2, 2);
         return blocks.size() == 1 && blocks[0].basis.size() == 1 && blocks[0].basis[0].weight() == 2;
       }},
      {"quantization",
       [&] {
         HbarPresentation U = build_enveloping(sl2_structure_constants(), 3);
         QElement C = U.parse("e*f + f*e + 1/2*h*h");
         return quantization_axiom_check(U, P).pass && centrality_check(U, C, 4).pass;
       }},
  });
}

Json counterex1_row(int order, bool corrupt) {
  PoissonPresentation P = maybe_corrupt(counterex1_presentation(order), corrupt, "u", "z", "2");
  return run_checks({
      {"jacobi", [&] { return check_jacobi(P).pass; }},
      {"center",
       [&] {
         auto blocks = poisson_center_basis(P, 1, 1);
         if (blocks.size() != 1 || blocks[0].basis.size() != 1) return false;
         // t * exp(-z) truncated at the context order
         TruncatedElement expected = P.zero(), term = P.var("t");
         for (int i = 0; i < order; ++i) {
           expected += term;
           term = term * P.var("z") * Scalar(-1, i + 1);
         }
         return blocks[0].basis[0] == expected;
       }},
      {"normalize", [&] { return !xi_zero(normalize_full(P, std::min(order, 5))); }},
  });
}

Json counterex2_row(int order, bool corrupt) {
  PoissonPresentation P = maybe_corrupt(counterex2_presentation(order), corrupt, "x", "y", "4*z^2");
  return run_checks({
      {"jacobi", [&] { return check_jacobi(P).pass && check_relation_ideal(P).empty(); }},
      {"euler",
       [&] {
         VectorFieldRep xi{{P.zero(), P.zero(), P.var("x"), P.var("y"), P.var("z")}};
         return lie_derivative_check(P, xi, 0).pass;
       }},
      {"normalize", [&] { return !normalize_full(P, std::min(order, 5)).product; }},
  });
}

Json kleinian_row(int n, int order, bool corrupt) {
  PoissonPresentation P = maybe_corrupt(kleinian_presentation(n, order), corrupt, "x", "y",
                                        std::to_string(n + 1) + "*z^" + std::to_string(n - 1));
  return run_checks({
      {"jacobi", [&] { return check_jacobi(P).pass; }},
      {"degree", [&] { return homogeneity_degree(P, P.context()->weights).degree == -2; }},
      {"relation", [&] { return check_relation_ideal(P).empty(); }},
  });
}

Json hypertoric_row(int order, bool corrupt) {
  TorusActionMatrix A{IntMatrix(std::vector<std::vector<long>>{{1, 0}, {1, 0}, {0, 1}, {0, corrupt ? 2 : 1}})};
  return run_checks({
      {"unimodular", [&] { return check_unimodular(A).unimodular; }},
      {"leaves",
       [&] {
         std::vector<int> dims;
         for (auto& l : enumerate_leaves(A)) dims.push_back(l.leaf_dim);
         return dims == std::vector<int>{4, 2, 2, 0};
       }},
      {"decompose",
       [&] {
         for (auto& leaf : enumerate_leaves(A)) {
           if (leaf.is_vertex) continue;
           NonvanishingData nz = NonvanishingData::generic(A.n());
           for (int f : leaf.F) nz.x[f] = nz.y[f] = false;
           auto r = decompose_at(A, leaf, nz);
           for (size_t i = 0; i < r.rest.size(); ++i)
             if (r.weight_x[i] + r.weight_y[i] != 2) return false;
           if (!verify_decomposition(A, r, std::min(order, 6)).pass) return false;
         }
         return true;
       }},
  });
}

Json z2_row(bool corrupt) {
  ExactMatrix g(std::vector<std::vector<Scalar>>{{Scalar(-1), Scalar(0)}, {Scalar(0), Scalar(corrupt ? -2 : -1)}});
  return run_checks({
      {"parabolics",
       [&] {
         GroupData G = close_group({g}, standard_symplectic_form(2));
         return G.order() == 2 && parabolic_subgroups(G).size() == 2;
       }},
      {"reflections",
       [&] {
         GroupData G = close_group({g}, standard_symplectic_form(2));
         SRAData s = symplectic_reflections(G);
         return s.reflections.size() == 1 && s.omega_s[0] == G.omega;
       }},
      {"ell",
       [&] {
         GroupData G = close_group({g}, standard_symplectic_form(2));
         auto ps = parabolic_subgroups(G);
         LeafSliceSummary L = leaf_slice_data(G, ps[0], {Scalar(1), Scalar(0)});
         return L.ell == 2 && L.stabilizer_order == 2;
       }},
  });
}

}  // namespace

Json run_selftest(int order, const std::string& corrupt) {
  Json rows = Json::array();
  auto add = [&](const std::string& name, Json checks) {
    bool pass = true;
    for (auto& [k, v] : checks.items()) pass = pass && v.get<bool>();
    rows.push_back(Json{{"fixture", name}, {"checks", checks}, {"pass", pass}});
  };
  add("sl2", sl2_row(order, corrupt == "sl2"));
  add("counterex1", counterex1_row(order, corrupt == "counterex1"));
  add("counterex2", counterex2_row(order, corrupt == "counterex2"));
  for (int n : {2, 3, 4}) {
    const std::string name = "kleinian" + std::to_string(n);
    add(name, kleinian_row(n, order, corrupt == name));
  }
  add("hypertoric-4x2", hypertoric_row(order, corrupt == "hypertoric-4x2"));
  add("z2-quotient", z2_row(corrupt == "z2-quotient"));
  bool all = true;
  for (auto& r : rows) all = all && r["pass"].get<bool>();
  return Json{{"fixtures", rows}, {"pass", all}};
}

std::string render_matrix(const Json& report) {
  std::string out;
  for (auto& r : report["fixtures"]) {
    std::string line = r["fixture"].get<std::string>();
    line.resize(16, ' ');
    for (auto& [k, v] : r["checks"].items()) line += " " + k + "=" + (v.get<bool>() ? "pass" : "FAIL");
    out += line + "\n";
  }
  out += std::string("overall: ") + (report["pass"].get<bool>() ? "pass" : "FAIL") + "\n";
  return out;
}

}  // namespace equislice::io
