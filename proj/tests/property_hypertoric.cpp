#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <set>

#include "equislice/hypertoric.hpp"
#include "oracles.hpp"
#include "random_gen.hpp"

using namespace equislice;
using namespace equislice::testgen;

namespace {

// Random unimodular full-rank matrices with entries in {-1, 0, 1}.
TorusActionMatrix random_unimodular(std::mt19937& g) {
  while (true) {
    const int m = uniform(g, 1, 2), n = uniform(g, m + 1, 5);
    TorusActionMatrix A{int_matrix(g, n, m, -1, 1)};
    if (rank(A.B) != m) continue;
    if (check_unimodular(A).unimodular) return A;
  }
}

}  // namespace

TEST_CASE("leaves match a brute-force enumeration") {
  auto g = rng_for(31);
  for (int trial = 0; trial < 40; ++trial) {
    TorusActionMatrix A = random_unimodular(g);
    std::set<std::pair<std::vector<int>, int>> got;
    for (auto& l : enumerate_leaves(A)) got.insert({l.F, l.leaf_dim});
    CHECK(got == oracle_leaves(A.B));
  }
  IntMatrix fixed(std::vector<std::vector<long>>{{1, 0}, {1, 0}, {0, 1}, {0, 1}});
  std::multiset<int> dims;
  for (auto& [F, d] : oracle_leaves(fixed)) dims.insert(d);
  CHECK(dims == std::multiset<int>{0, 2, 2, 4});
}

TEST_CASE("leaf dimensions are even and the open leaf is generic") {
  auto g = rng_for(32);
  for (int trial = 0; trial < 40; ++trial) {
    TorusActionMatrix A = random_unimodular(g);
    auto leaves = enumerate_leaves(A);
    for (auto& l : leaves) CHECK(l.leaf_dim % 2 == 0);
    // the open leaf exists iff every row lies in a relation
    if (leaves.front().F.empty()) CHECK(leaves.front().leaf_dim == 2 * (A.n() - A.m()));
    // zero rows are untouched T*C factors, so the smallest leaf has dimension 2 * #zero rows
    int zero_rows = 0;
    for (int i = 0; i < A.n(); ++i) {
      auto row = A.B.row(i);
      zero_rows += std::all_of(row.begin(), row.end(), [](long x) { return x == 0; });
    }
    CHECK(leaves.back().leaf_dim == 2 * zero_rows);
  }
}

TEST_CASE("slices of unimodular matrices are unimodular") {
  auto g = rng_for(33);
  for (int trial = 0; trial < 40; ++trial) {
    TorusActionMatrix A = random_unimodular(g);
    for (auto& l : enumerate_leaves(A)) {
      IntMatrix s = slice_matrix(A, l.F);
      if (s.rows() == 0 || s.cols() == 0) continue;
      CHECK(check_unimodular(TorusActionMatrix{s}).unimodular);
    }
  }
}

TEST_CASE("every decomposition has weights summing to two and verifies") {
  auto g = rng_for(34);
  for (int trial = 0; trial < 25; ++trial) {
    TorusActionMatrix A = random_unimodular(g);
    for (auto& l : enumerate_leaves(A)) {
      if (l.is_vertex) continue;
      NonvanishingData nz = NonvanishingData::generic(A.n());
      for (int f : l.F) nz.x[f] = nz.y[f] = false;
      DecompositionReport r = decompose_at(A, l, nz);
      for (size_t i = 0; i < r.rest.size(); ++i) CHECK(r.weight_x[i] + r.weight_y[i] == 2);
      CHECK(r.G.size() + r.rest.size() + l.F.size() == static_cast<size_t>(A.n()));
      CHECK(verify_decomposition(A, r, 5).pass);
    }
  }
}

TEST_CASE("leaves are independent of row order") {
  auto g = rng_for(35);
  for (int trial = 0; trial < 30; ++trial) {
    TorusActionMatrix A = random_unimodular(g);
    std::vector<int> perm(A.n());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), g);
    TorusActionMatrix P{A.B.select_rows(perm)};
    std::multiset<std::pair<std::vector<int>, int>> a, b;
    for (auto& l : enumerate_leaves(A)) a.insert({l.F, l.leaf_dim});
    for (auto& l : enumerate_leaves(P)) {
      std::vector<int> F;
      for (int f : l.F) F.push_back(perm[f]);
      std::sort(F.begin(), F.end());
      b.insert({F, l.leaf_dim});
    }
    CHECK(a == b);
  }
}

TEST_CASE("unimodularity agrees with determinants of all square submatrices") {
  auto g = rng_for(36);
  for (int trial = 0; trial < 300; ++trial) {
    const int m = uniform(g, 1, 2), n = uniform(g, m, 4);
    TorusActionMatrix A{int_matrix(g, n, m, -2, 2)};
    if (rank(A.B) != m) continue;
    bool expected = true;
    for (int mask = 0; mask < (1 << n); ++mask) {
      std::vector<int> rows;
      for (int i = 0; i < n; ++i)
        if (mask >> i & 1) rows.push_back(i);
      if (static_cast<int>(rows.size()) != m) continue;
      long d = determinant(A.B.select_rows(rows));
      expected = expected && (d == 0 || d == 1 || d == -1);
    }
    CHECK(check_unimodular(A).unimodular == expected);
  }
}
