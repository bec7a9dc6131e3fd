#include "doctest.h"

#include "equislice/hypertoric.hpp"

using namespace equislice;

namespace {

TorusActionMatrix torus(const std::vector<std::vector<long>>& rows) { return TorusActionMatrix{IntMatrix(rows)}; }

const std::vector<std::vector<long>> kFourByTwo{{1, 0}, {1, 0}, {0, 1}, {0, 1}};

std::vector<int> dims(const TorusActionMatrix& A) {
  std::vector<int> out;
  for (auto& l : enumerate_leaves(A)) out.push_back(l.leaf_dim);
  return out;
}

NonvanishingData only_x(int n, const std::vector<int>& on) {
  NonvanishingData nz{std::vector<bool>(n, false), std::vector<bool>(n, false)};
  for (int i : on) nz.x[i] = true;
  return nz;
}

}  // namespace

TEST_CASE("check_unimodular examples") {
  CHECK(check_unimodular(torus({{1}, {1}})).unimodular);
  auto bad = check_unimodular(torus({{1}, {2}}));
  CHECK_FALSE(bad.unimodular);
  REQUIRE(bad.witness);
  CHECK(std::abs(*bad.witness) == 2);
  CHECK(bad.witness_rows == std::vector<int>{1});
  CHECK(check_unimodular(torus(kFourByTwo)).unimodular);
  CHECK_THROWS(check_unimodular(torus({{1, 1}, {2, 2}})));
}

TEST_CASE("moment_map examples") {
  auto P2 = cotangent_presentation(2);
  auto mu = moment_map(torus({{1}, {1}}), P2.context());
  REQUIRE(mu.size() == 1);
  CHECK(mu[0] == P2.parse("x1*y1 + x2*y2"));
  CHECK(moment_map(torus({{1}, {-1}}), P2.context())[0] == P2.parse("x1*y1 - x2*y2"));
  auto P4 = cotangent_presentation(4);
  auto mu4 = moment_map(torus(kFourByTwo), P4.context());
  REQUIRE(mu4.size() == 2);
  CHECK(mu4[0] == P4.parse("x1*y1 + x2*y2"));
  CHECK(mu4[1] == P4.parse("x3*y3 + x4*y4"));
  CHECK(bracket(P4, P4.var("x1"), P4.var("y1")) == P4.one());
  // moment map components commute
  CHECK(bracket(P4, mu4[0], mu4[1]).is_zero());
}

TEST_CASE("enumerate_leaves examples") {
  CHECK(dims(torus({{1}, {1}})) == std::vector<int>{2, 0});
  CHECK(dims(torus(kFourByTwo)) == std::vector<int>{4, 2, 2, 0});
  CHECK(dims(torus({{1}, {1}, {1}})) == std::vector<int>{4, 0});
  auto leaves = enumerate_leaves(torus({{1}, {1}}));
  CHECK(leaves[0].F.empty());
  CHECK(leaves[1].F == std::vector<int>{0, 1});
  CHECK(leaves[1].is_vertex);
  CHECK_THROWS(enumerate_leaves(torus({{1}, {2}})));
}

TEST_CASE("slice_matrix examples") {
  CHECK(slice_matrix(torus(kFourByTwo), {0, 1}).to_string() == "[[1],[1]]");
  IntMatrix empty = slice_matrix(torus(kFourByTwo), {});
  CHECK(empty.rows() == 0);
  CHECK(slice_matrix(torus({{1}, {1}}), {0, 1}).to_string() == "[[1],[1]]");
  CHECK_THROWS(slice_matrix(torus(kFourByTwo), {0}));
}

TEST_CASE("decompose_at examples") {
  auto A = torus({{1}, {1}});
  auto open = enumerate_leaves(A)[0];
  auto r = decompose_at(A, open, only_x(2, {0, 1}));
  CHECK(r.G == std::vector<int>{0});
  REQUIRE(r.rest == std::vector<int>{1});
  CHECK(r.r[0][0] == -1);
  CHECK(r.weight_x[0] == 0);
  CHECK(r.weight_y[0] == 2);
  CHECK(verify_decomposition(A, r, 6).pass);

  auto B = torus(kFourByTwo);
  auto leaf = leaf_for_flat(B, {0, 1});
  CHECK(leaf.leaf_dim == 2);
  auto s = decompose_at(B, leaf, only_x(4, {2, 3}));
  CHECK(s.G == std::vector<int>{2});
  REQUIRE(s.rest == std::vector<int>{3});
  CHECK(s.weight_x[0] == 0);
  CHECK(s.weight_y[0] == 2);
  CHECK(s.slice.to_string() == "[[1],[1]]");
  CHECK(verify_decomposition(B, s, 6).pass);

  auto C = torus({{1}, {1}, {1}});
  auto c = decompose_at(C, enumerate_leaves(C)[0], NonvanishingData::generic(3));
  CHECK(c.rest.size() == 2);
  for (size_t i = 0; i < c.rest.size(); ++i) CHECK(c.weight_x[i] + c.weight_y[i] == 2);
  CHECK(verify_decomposition(C, c, 6).pass);

  // a point on a smaller orbit has no admissible G
  CHECK_THROWS(decompose_at(A, open, only_x(2, {})));
}

TEST_CASE("corrupted exponents fail verification") {
  auto A = torus({{1}, {1}});
  auto r = decompose_at(A, enumerate_leaves(A)[0], only_x(2, {0, 1}));
  r.r[0][0] = -2;
  auto v = verify_decomposition(A, r, 6);
  CHECK_FALSE(v.pass);
  REQUIRE_FALSE(v.failures.empty());
  CHECK_FALSE(v.failures[0].residue.is_zero());
}

TEST_CASE("nonvanishing data parsing") {
  auto nz = NonvanishingData::parse(3, "x1,y3");
  CHECK(nz.x == std::vector<bool>{true, false, false});
  CHECK(nz.y == std::vector<bool>{false, false, true});
  CHECK_THROWS(NonvanishingData::parse(3, "x4"));
  CHECK_THROWS(NonvanishingData::parse(3, "w1"));
}
