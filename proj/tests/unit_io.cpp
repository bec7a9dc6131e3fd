#include "doctest.h"

#include <string>

#include "equislice_io.hpp"
#include "equislice/fixtures.hpp"

using namespace equislice;
using namespace equislice::io;

namespace {

bool same_presentation(const PoissonPresentation& a, const PoissonPresentation& b) {
  if (!a.context()->same_shape(*b.context()) || a.context()->order != b.context()->order) return false;
  for (int i = 0; i < a.size(); ++i)
    for (int j = i + 1; j < a.size(); ++j)
      if (a.entry(i, j) != b.entry(i, j).in_context(a.context())) return false;
  if (a.relations().size() != b.relations().size()) return false;
  for (size_t r = 0; r < a.relations().size(); ++r)
    if (a.relations()[r].poly != b.relations()[r].poly.in_context(a.context())) return false;
  return true;
}

// Message of the InputError thrown by f, or "" when nothing is thrown.
template <class F>
std::string input_error(F f) {
  try {
    f();
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("presentations round-trip through JSON") {
  for (const PoissonPresentation& P :
       {sl2_presentation(5), kleinian_presentation(3, 4), counterex1_presentation(6), counterex2_presentation(5),
        standard_presentation(2, 2, 3, 6), product_presentation(standard_presentation(1, 1, 1), kleinian_slice(2))}) {
    Json doc = presentation_to_json(P);
    PoissonPresentation Q = presentation_from_json(doc, std::nullopt);
    CHECK(same_presentation(P, Q));
    CHECK(presentation_to_json(Q).dump() == doc.dump());
  }
}

TEST_CASE("builtin documents") {
  auto P = presentation_from_json(load_input("@kleinian:3"), 5);
  CHECK(same_presentation(P, kleinian_presentation(3, 5)));
  auto S = presentation_from_json(load_input("@standard:2,1"), 6);
  CHECK(same_presentation(S, standard_presentation(2, 1, 1, 6)));
  auto T = torus_from_json(load_input("@hyper-4x2"));
  CHECK(T.B.to_string() == "[[1,0],[1,0],[0,1],[0,1]]");
  CHECK(group_from_json(load_input("@zn:4")).order() == 4);
  CHECK(group_from_json(load_input("@binary-dihedral:2")).order() == 8);
  HbarJob job = hbar_from_json(load_input("@D:2,2"), 3);
  CHECK(job.algebra.size() == 4);
  REQUIRE(job.classical);
  CHECK(quantization_axiom_check(job.algebra, *job.classical).pass);
  HbarJob t = hbar_from_json(load_input("@D:1,2*weyl:2,2"), 3);
  CHECK(t.algebra.names() == std::vector<std::string>{"t", "u", "z1", "z2"});
  CHECK_THROWS_AS(load_input("@nosuch"), InputError);
}

TEST_CASE("inline matrices and explicit documents") {
  auto T = torus_from_json(load_input("[[1],[1]]"));
  CHECK(T.B.rows() == 2);
  Json doc = Json::parse(R"({"variables":["x","y"],"brackets":[["x","y","1"]],"order":4})");
  auto P = presentation_from_json(doc, std::nullopt);
  CHECK(P.context()->order == 4);
  CHECK(bracket(P, P.var("y"), P.var("x")) == P.parse("-1"));
  Json g = Json::parse(R"({"cyclotomic_order":3,"generators":[[[[0,1],0],[0,[-1,-1]]]]})");
  GroupData G = group_from_json(g);
  CHECK(G.order() == 3);
  CHECK(vector_from_json(Json::parse(R"([1,"1/2",[0,1]])"), 3, "/v")[2] == Scalar::zeta(3));
}

TEST_CASE("input errors carry locations") {
  CHECK(input_error([] { load_input("{\"variables\": [}"); }).rfind("argument: byte", 0) == 0);
  CHECK(input_error([] { load_input("/nonexistent/file.json"); }).rfind("/nonexistent/file.json: cannot open", 0) == 0);
  auto bad_bracket = Json::parse(R"({"variables":["x","y"],"brackets":[["x","q","1"]]})");
  CHECK(input_error([&] { presentation_from_json(bad_bracket, 4, "in"); }) ==
        "in/brackets/0/1: unknown variable \"q\"");
  auto bad_expr = Json::parse(R"({"variables":["x","y"],"brackets":[["x","y","1+*"]]})");
  CHECK(input_error([&] { presentation_from_json(bad_expr, 4, "in"); }).rfind("in/brackets/0/2: ", 0) == 0);
  auto bad_weights = Json::parse(R"({"variables":["x","y"],"weights":[1]})");
  CHECK(input_error([&] { presentation_from_json(bad_weights, 4, "in"); }) == "in/weights: expected 2 weights");
  CHECK(input_error([] { torus_from_json(Json::parse(R"({"matrix":[[1,0],[1]]})"), "m"); }).rfind("m/matrix/1", 0) ==
        0);
  CHECK(input_error([] { group_from_json(Json::parse(R"({"generators":[[[2,0],[0,1]]]})"), "g"); }).rfind("g", 0) ==
        0);
  CHECK(input_error([] { hbar_from_json(Json::parse(R"({"family":"nope"})"), 3, "a"); }) ==
        "a/family: unknown family \"nope\"");
}

TEST_CASE("reports serialize deterministically") {
  auto P = cyclic_presentation();
  Json j = jacobi_json(P, check_jacobi(P));
  CHECK(j.dump() == jacobi_json(P, check_jacobi(P)).dump());
  CHECK(j["pass"] == false);
  std::string text = render_text(j);
  CHECK(text.find("pass: false") != std::string::npos);
  Json h = homogeneity_json(homogeneity_degree(sl2_presentation(), {1, 1, 1}));
  CHECK(h["degree"] == -1);
}
