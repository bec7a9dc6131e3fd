#include "doctest.h"

#include "equislice/quotient.hpp"

using namespace equislice;

namespace {

ExactMatrix diag(const std::vector<Scalar>& d) {
  ExactMatrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
  return m;
}

GroupData cyclic(int n) {
  return close_group({diag({Scalar::zeta(n), Scalar::zeta(n).inverse()})}, standard_symplectic_form(2));
}

GroupData klein4() {
  return close_group({diag({-1, -1, 1, 1}), diag({1, 1, -1, -1})}, standard_symplectic_form(4));
}

std::vector<Scalar> e(int dim, int i) {
  std::vector<Scalar> v(dim, Scalar(0));
  v[i] = 1;
  return v;
}

}  // namespace

TEST_CASE("close_group examples") {
  CHECK(close_group({diag({-1, -1})}, standard_symplectic_form(2)).order() == 2);
  GroupData z3 = cyclic(3);
  CHECK(z3.order() == 3);
  CHECK(z3.cyclotomic_order == 3);
  Scalar i = Scalar::zeta(4);
  ExactMatrix a = diag({i, -i});
  ExactMatrix b(std::vector<std::vector<Scalar>>{{0, 1}, {-1, 0}});
  GroupData bd = close_group({a, b}, standard_symplectic_form(2));
  CHECK(bd.order() == 8);
  CHECK(bd.classes.size() == 5);
  CHECK(bd.label(bd.index_of(diag({-1, -1}))) == "-Id");
  CHECK_THROWS(close_group({diag({2, 1})}, standard_symplectic_form(2)));
  CHECK_THROWS(close_group({diag({2, Scalar(1, 2)})}, standard_symplectic_form(2), 64));
}

TEST_CASE("group tables are consistent") {
  GroupData g = cyclic(4);
  for (int a = 0; a < g.order(); ++a) {
    CHECK(g.product(a, g.inverse[a]) == 0);
    for (int b = 0; b < g.order(); ++b) CHECK(g.elements[g.product(a, b)] == g.elements[a] * g.elements[b]);
  }
}

TEST_CASE("parabolic_subgroups examples") {
  auto z2 = parabolic_subgroups(close_group({diag({-1, -1})}, standard_symplectic_form(2)));
  REQUIRE(z2.size() == 2);
  CHECK(z2[0].subgroup.size() == 1);
  CHECK(z2[1].subgroup.size() == 2);
  CHECK(z2[0].leaf_dim == 2);
  CHECK(z2[1].leaf_dim == 0);

  GroupData k = klein4();
  auto p = parabolic_subgroups(k);
  REQUIRE(p.size() == 4);
  std::vector<int> sizes;
  for (auto& r : p) sizes.push_back(static_cast<int>(r.subgroup.size()));
  CHECK(sizes == std::vector<int>{1, 2, 2, 4});
  // the diagonal Z/2 fixes only 0
  int diagonal = k.index_of(diag({-1, -1, -1, -1}));
  for (auto& r : p)
    if (r.subgroup.size() == 2) CHECK(r.subgroup[1] != diagonal);

  CHECK(parabolic_subgroups(cyclic(3)).size() == 2);
}

TEST_CASE("symplectic_reflections examples") {
  GroupData z2 = close_group({diag({-1, -1})}, standard_symplectic_form(2));
  SRAData s = symplectic_reflections(z2);
  REQUIRE(s.reflections.size() == 1);
  CHECK(s.classes.size() == 1);
  CHECK(s.omega_s[0] == z2.omega);
  for (int n : {2, 3, 4, 5}) {
    SRAData c = symplectic_reflections(cyclic(n));
    CHECK(static_cast<int>(c.reflections.size()) == n - 1);
    CHECK(static_cast<int>(c.classes.size()) == n - 1);
  }
  GroupData k = klein4();
  SRAData ks = symplectic_reflections(k);
  REQUIRE(ks.reflections.size() == 2);
  int first = k.index_of(diag({-1, -1, 1, 1}));
  for (size_t r = 0; r < ks.reflections.size(); ++r) {
    if (ks.reflections[r] != first) continue;
    ExactMatrix expected(4, 4);
    expected(0, 1) = 1;
    expected(1, 0) = -1;
    CHECK(ks.omega_s[r] == expected);
  }
}

TEST_CASE("leaf_slice_data examples") {
  GroupData z2 = close_group({diag({-1, -1})}, standard_symplectic_form(2));
  auto p2 = parabolic_subgroups(z2);
  CHECK_THROWS(leaf_slice_data(z2, p2[1], {Scalar(1), Scalar(0)}));
  CHECK_THROWS(leaf_slice_data(z2, p2[1], {Scalar(0), Scalar(0)}));

  GroupData k = klein4();
  int first = k.index_of(diag({-1, -1, 1, 1}));
  for (auto& r : parabolic_subgroups(k)) {
    if (r.subgroup != std::vector<int>{0, first}) continue;
    LeafSliceSummary L = leaf_slice_data(k, r, {0, 0, 1, 2});
    CHECK(L.leaf_dim == 2);
    CHECK(L.slice_dim == 2);
    CHECK(L.slice_group.size() == 2);
    CHECK(L.slice_group_closed);
    CHECK(L.residual_order == 2);
    CHECK(L.minus_id_in_residual);
    CHECK(L.ell == 2);
    CHECK(L.stabilizer_order == 2);
  }

  GroupData z3 = cyclic(3);
  LeafSliceSummary L = leaf_slice_data(z3, parabolic_subgroups(z3)[0], {Scalar(1), Scalar(1)});
  CHECK(L.leaf_dim == 2);
  CHECK(L.slice_dim == 0);
  CHECK(L.ell == 1);
  CHECK(L.stabilizer_order == 1);
}

TEST_CASE("sra_relation examples") {
  GroupData triv = close_group({ExactMatrix::identity(2)}, standard_symplectic_form(2));
  SRAData st = symplectic_reflections(triv);
  SraExpression w = sra_relation(triv, st, e(2, 0), e(2, 1));
  REQUIRE(w.terms.size() == 1);
  CHECK(w.terms[0].element == 0);
  CHECK(w.terms[0].coefficient.hbar == Scalar(1));

  GroupData z2 = close_group({diag({-1, -1})}, standard_symplectic_form(2));
  SRAData s = symplectic_reflections(z2);
  SraExpression x = sra_relation(z2, s, e(2, 0), e(2, 1));
  CHECK(x.to_string(z2) == "(hbar)*[Id] + (c1)*[-Id]");
  SraExpression y = sra_relation(z2, s, e(2, 1), e(2, 0));
  REQUIRE(y.terms.size() == 2);
  CHECK(y.terms[0].coefficient.hbar == Scalar(-1));
  CHECK(y.terms[1].coefficient.c[0] == Scalar(-1));
  CHECK(sra_relation(z2, s, e(2, 0), e(2, 0)).terms.empty());
}
