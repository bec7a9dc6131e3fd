#include "doctest.h"

#include <algorithm>

#include "equislice/darboux.hpp"
#include "equislice/fixtures.hpp"
#include "equislice/linalg.hpp"
#include "equislice/poisson.hpp"

using namespace equislice;

namespace {

bool contains(const std::vector<std::vector<int>>& vs, const std::vector<int>& v) {
  return std::find(vs.begin(), vs.end(), v) != vs.end();
}

std::vector<TruncatedElement> all_basis(const std::vector<CenterBlock>& blocks) {
  std::vector<TruncatedElement> out;
  for (auto& b : blocks) out.insert(out.end(), b.basis.begin(), b.basis.end());
  return out;
}

// C[a,b,m]/(m^2 - ab) as the Z/2 invariants a = x^2, b = y^2, m = xy of C[x,y] with {x,y} = 1.
PoissonPresentation a1_invariants() {
  PoissonPresentation P(make_context({"a", "b", "m"}, {1, 1, 1}, {false, false, false}, {false, false, false}, 8));
  P.set("a", "b", "4*m");
  P.set("a", "m", "2*a");
  P.set("m", "b", "2*b");
  P.add_relation(P.parse("m^2 - a*b"));
  return P;
}

// dim of the degree-d part of C[x,y]^{Z/2} / {., .}, computed on x^i y^j directly.
int a1_hp0_oracle(int d) {
  using Poly = std::map<std::pair<int, int>, Scalar>;
  std::vector<Poly> brackets;
  for (int d1 = 0; d1 <= d + 2; d1 += 2) {
    int d2 = d + 2 - d1;
    for (int i = 0; i <= d1; ++i)
      for (int k = 0; k <= d2; ++k) {
        int j = d1 - i, l = d2 - k;
        long c = static_cast<long>(i) * l - static_cast<long>(j) * k;
        if (c == 0) continue;
        brackets.push_back({{{i + k - 1, j + l - 1}, Scalar(c)}});
      }
  }
  ExactMatrix M(static_cast<int>(brackets.size()), d + 1);
  for (size_t r = 0; r < brackets.size(); ++r)
    for (auto& [e, c] : brackets[r]) M(static_cast<int>(r), e.first) = c;
  return d + 1 - (brackets.empty() ? 0 : exact_rank(M));
}

}  // namespace

TEST_CASE("bracket examples") {
  PoissonPresentation P = sl2_presentation();
  CHECK(bracket(P, P.var("e"), P.parse("f^2")) == P.parse("2*f*h"));
  auto c = P.parse("2*e*f + 1/2*h^2");
  for (const char* g : {"e", "f", "h"}) CHECK(bracket(P, c, P.var(g)).is_zero());
  for (int k : {-1, 0, 1, 2}) {
    PoissonPresentation S = standard_presentation(1, k, 1);
    CHECK(bracket(S, S.var("t"), S.var("u")) == TruncatedElement::variable(S.context(), "t", 1 - k));
  }
}

TEST_CASE("check_jacobi examples") {
  CHECK(check_jacobi(sl2_presentation()).pass);
  CHECK(check_jacobi(kleinian_presentation(3)).pass);
  CHECK(check_relation_ideal(kleinian_presentation(3)).empty());
  PoissonPresentation C = cyclic_presentation();
  JacobiReport r = check_jacobi(C);
  REQUIRE_FALSE(r.pass);
  REQUIRE(r.violations.size() == 1);
  auto res = r.violations[0].residue;
  CHECK((res == C.parse("x + y + z") || res == C.parse("-x - y - z")));
}

TEST_CASE("hamiltonian_field examples") {
  PoissonPresentation P = counterex1_presentation();
  VectorFieldRep xi = hamiltonian_field(P, P.var("u"));
  CHECK(xi.images[0] == P.var("t"));
  CHECK(xi.images[1].is_zero());
  CHECK(xi.images[2] == P.one());
  PoissonPresentation S = sl2_presentation();
  VectorFieldRep xc = hamiltonian_field(S, S.parse("2*e*f + 1/2*h^2"));
  for (auto& im : xc.images) CHECK(im.is_zero());
  for (int k : {0, 2}) {
    PoissonPresentation T = standard_presentation(1, k, 1);
    CHECK(hamiltonian_field(T, T.var("t")).images[1] == TruncatedElement::variable(T.context(), "t", 1 - k));
  }
}

TEST_CASE("lie_derivative_check examples") {
  PoissonPresentation P = counterex2_presentation();
  VectorFieldRep xi{{P.zero(), P.zero(), P.var("x"), P.var("y"), P.var("z")}};
  CHECK(lie_derivative_check(P, xi, 0).pass);
  for (int n : {1, 2, 3})
    for (int k : {-1, 0, 1, 2}) {
      PoissonPresentation S = standard_presentation(n, k, 1);
      CHECK(lie_derivative_check(S, euler_field(S), -k).pass);
    }
  for (int k : {0, 1, 2}) {
    PoissonPresentation S = standard_presentation(1, k, 1);
    VectorFieldRep udu{{S.zero(), S.var("u")}};
    auto r = lie_derivative_check(S, udu, k);
    CHECK_FALSE(r.pass);
    REQUIRE(r.violations.size() == 1);
    // u d_u scales {t,u} by -1, so the residue is (-1 - k) t^{1-k}
    CHECK(r.violations[0].residue * Scalar(-1 - k) ==
          Scalar((-1 - k) * (-1 - k)) * TruncatedElement::variable(S.context(), "t", 1 - k) * Scalar(1));
  }
}

TEST_CASE("homogeneity_degree examples") {
  PoissonPresentation S = sl2_presentation();
  CHECK(homogeneity_degree(S, {1, 1, 1}).degree == -1);
  for (int n : {2, 3, 4}) {
    PoissonPresentation K = kleinian_presentation(n);
    CHECK(homogeneity_degree(K, {n, n, 2}).degree == -2);
  }
  for (int n : {1, 2, 3})
    for (int k : {-1, 0, 1, 2}) {
      PoissonPresentation T = standard_presentation(n, k, 1);
      CHECK(homogeneity_degree(T, T.context()->weights).degree == -k);
    }
  HomogeneityResult bad = homogeneity_degree(sl2_presentation(), {1, 2, 1});
  CHECK_FALSE(bad.degree);
  CHECK_FALSE(bad.offending.empty());
}

TEST_CASE("grading_search examples") {
  CHECK(contains(grading_search(kleinian_presentation(2), -1, 4), {1, 1, 1}));
  CHECK(grading_search(counterex2_presentation(), -1, 6).empty());
  CHECK(contains(grading_search(sl2_presentation(), -1, 2), {1, 1, 1}));
}

TEST_CASE("poisson_center_basis examples") {
  auto st = all_basis(poisson_center_basis(standard_presentation(1, 1, 1), -2, 2));
  REQUIRE(st.size() == 1);
  CHECK(st[0] == standard_presentation(1, 1, 1).one());

  PoissonPresentation S = sl2_presentation();
  auto blocks = poisson_center_basis(S, 0, 2);
  auto basis = all_basis(blocks);
  REQUIRE(basis.size() == 2);
  CHECK(basis[0] == S.one());
  CHECK(basis[1] * Scalar(2) == S.parse("2*e*f + 1/2*h^2"));

  PoissonPresentation C = counterex1_presentation(5);
  auto cb = all_basis(poisson_center_basis(C, 1, 1));
  REQUIRE(cb.size() == 1);
  CHECK(cb[0] == C.parse("t - t*z + 1/2*t*z^2 - 1/6*t*z^3 + 1/24*t*z^4"));
}

TEST_CASE("hp0_graded examples") {
  PoissonPresentation W(make_context({"x", "y"}, {1, 1}, {false, false}, {false, false}, 8));
  W.set("x", "y", "1");
  GradedDimTable w = hp0_graded(W, 4);
  for (auto& [deg, dim] : w.dims) CHECK(dim == 0);

  GradedDimTable a = hp0_graded(a1_invariants(), 6);
  CHECK(a.dims.at(0) == 1);
  for (int d = 0; d <= 6; ++d) CHECK(a.dims.at(d) == a1_hp0_oracle(2 * d));
  CHECK(a.bracket_degree == -1);
  CHECK_THROWS(hp0_graded(counterex1_presentation(), 3));
}

TEST_CASE("relation reduction is compatible with brackets") {
  PoissonPresentation K = kleinian_presentation(2);
  auto r = K.parse("x*y + z^2");
  CHECK(K.reduce(r).is_zero());
  CHECK(K.reduce(bracket(K, r, K.var("x"))).is_zero());
}
