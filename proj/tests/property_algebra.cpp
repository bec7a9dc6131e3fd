#include "doctest.h"

#include <algorithm>
#include <numeric>

#include "equislice/linalg.hpp"
#include "random_gen.hpp"

using namespace equislice;
using namespace equislice::testgen;

namespace {

ContextPtr tuz(int order) {
  return make_context({"t", "u", "z"}, {1, 0, 2}, {true, false, false}, {false, true, true}, order);
}

// Leibniz-formula determinant over all permutations.
long permutation_determinant(const IntMatrix& m) {
  std::vector<int> p(m.rows());
  std::iota(p.begin(), p.end(), 0);
  long det = 0;
  do {
    long term = 1;
    for (int i = 0; i < m.rows(); ++i) term *= m(i, p[i]);
    int inversions = 0;
    for (int i = 0; i < m.rows(); ++i)
      for (int j = i + 1; j < m.rows(); ++j) inversions += p[i] > p[j];
    det += inversions % 2 ? -term : term;
  } while (std::next_permutation(p.begin(), p.end()));
  return det;
}

bool divides(long a, long b) { return a == 0 ? b == 0 : b % a == 0; }

}  // namespace

TEST_CASE("ring axioms hold exactly") {
  auto g = rng_for(1);
  auto ctx = tuz(5);
  for (int trial = 0; trial < 60; ++trial) {
    auto a = element(g, ctx, 4), b = element(g, ctx, 4), c = element(g, ctx, 4);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a * b == b * a);
    CHECK((a - a).is_zero());
    CHECK(a + b == arith(b, a, ArithOp::add));
  }
}

TEST_CASE("truncation is a ring map") {
  auto g = rng_for(2);
  auto big = tuz(6);
  for (int trial = 0; trial < 60; ++trial) {
    int m = uniform(g, 1, 5);
    auto small = tuz(m);
    auto a = element(g, big, 4), b = element(g, big, 4);
    auto lhs = (a * b).in_context(small);
    auto rhs = a.in_context(small) * b.in_context(small);
    CHECK(lhs == rhs);
    CHECK((a * b).truncated(m) == mul_truncated(a.truncated(m), b.truncated(m), m));
  }
}

TEST_CASE("weights add under products") {
  auto g = rng_for(3);
  auto ctx = tuz(6);
  for (int trial = 0; trial < 60; ++trial) {
    int wa = uniform(g, -3, 3), wb = uniform(g, -3, 3);
    auto a = homogeneous(g, ctx, wa, 3), b = homogeneous(g, ctx, wb, 3);
    REQUIRE(a.weight() == wa);
    REQUIRE(b.weight() == wb);
    auto p = a * b;
    if (!p.is_zero()) CHECK(p.weight() == wa + wb);
  }
}

TEST_CASE("units invert and text round-trips") {
  auto g = rng_for(4);
  auto ctx = tuz(6);
  auto one = TruncatedElement::constant(ctx, Scalar(1));
  for (int trial = 0; trial < 40; ++trial) {
    Mono lead;
    lead.e[0] = static_cast<int8_t>(uniform(g, -3, 3));
    auto a = TruncatedElement::monomial(ctx, lead, rational(g));
    auto rest = element(g, ctx, 3);
    a += rest - rest.j_component(0);
    CHECK(a * invert_unit(a) == one);
    CHECK(parse_element(ctx, a.to_string()) == a);
  }
}

TEST_CASE("cyclotomic scalars form a field") {
  auto g = rng_for(5);
  for (int n : {3, 4, 5, 6, 8, 12}) {
    for (int trial = 0; trial < 15; ++trial) {
      Scalar a = cyclotomic(g, n), b = cyclotomic(g, n), c = cyclotomic(g, n);
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      if (!a.is_zero()) CHECK((a * a.inverse()).is_one());
      CHECK(a.conjugate().conjugate() == a);
      CHECK((a * b).conjugate() == a.conjugate() * b.conjugate());
      CHECK(a.lifted(2 * n) * b.lifted(2 * n) == (a * b).lifted(2 * n));
    }
    CHECK(Scalar::zeta(n, n).is_one());
  }
}

TEST_CASE("determinant matches the permutation expansion") {
  auto g = rng_for(6);
  for (int trial = 0; trial < 200; ++trial) {
    int n = uniform(g, 1, 5);
    IntMatrix m = int_matrix(g, n, n, -4, 4);
    CHECK(determinant(m) == permutation_determinant(m));
  }
}

TEST_CASE("smith normal form is a certified invariant") {
  auto g = rng_for(7);
  for (int trial = 0; trial < 120; ++trial) {
    int r = uniform(g, 1, 4), c = uniform(g, 1, 4);
    IntMatrix m = int_matrix(g, r, c, -5, 5);
    SmithForm s = smith_normal_form(m);
    CHECK(s.U * m * s.V == s.D);
    CHECK(std::abs(determinant(s.U)) == 1);
    CHECK(std::abs(determinant(s.V)) == 1);
    for (size_t i = 0; i + 1 < s.invariant_factors.size(); ++i)
      CHECK(divides(s.invariant_factors[i], s.invariant_factors[i + 1]));
    CHECK(static_cast<int>(s.invariant_factors.size()) == rank(m));
    std::vector<int> rows(r), cols(c);
    std::iota(rows.begin(), rows.end(), 0);
    std::iota(cols.begin(), cols.end(), 0);
    std::shuffle(rows.begin(), rows.end(), g);
    std::shuffle(cols.begin(), cols.end(), g);
    IntMatrix p = m.select_rows(rows).select_cols(cols);
    CHECK(smith_normal_form(p).invariant_factors == s.invariant_factors);
  }
}

TEST_CASE("kernel bases are saturated and annihilated") {
  auto g = rng_for(8);
  for (int trial = 0; trial < 80; ++trial) {
    int r = uniform(g, 1, 3), c = uniform(g, 2, 5);
    IntMatrix m = int_matrix(g, r, c, -3, 3);
    IntMatrix k = kernel_basis(m);
    CHECK(k.rows() == c - rank(m));
    if (k.rows() == 0) continue;
    CHECK(m * k.transpose() == IntMatrix(r, k.rows()));
    CHECK(saturation(k) == k);
  }
}

TEST_CASE("exact rank agrees with the integer rank") {
  auto g = rng_for(9);
  for (int trial = 0; trial < 80; ++trial) {
    int r = uniform(g, 1, 4), c = uniform(g, 1, 4);
    IntMatrix m = int_matrix(g, r, c, -2, 2);
    ExactMatrix e(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) e(i, j) = Scalar(m(i, j));
    CHECK(exact_rank(e) == rank(m));
    for (auto& v : kernel_vectors(e)) {
      auto img = e.apply(v);
      CHECK(std::all_of(img.begin(), img.end(), [](const Scalar& s) { return s.is_zero(); }));
    }
  }
}
