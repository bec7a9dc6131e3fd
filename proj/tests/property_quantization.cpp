#include "doctest.h"

#include <functional>

#include "equislice/darboux.hpp"
#include "equislice/fixtures.hpp"
#include "equislice/quantization.hpp"
#include "random_gen.hpp"

using namespace equislice;
using namespace equislice::testgen;

namespace {

struct Family {
  HbarPresentation A;
  PoissonPresentation P;
};

std::vector<Family> families() {
  std::vector<Family> out;
  for (int n : {1, 2})
    for (int k : {1, 2}) out.push_back({build_d(n, k, 3), standard_presentation(n, k, 1, 8)});
  out.push_back({build_enveloping(sl2_structure_constants(), 3), sl2_presentation(8)});
  return out;
}

// A random word: a product of generator powers in random order, plus a few such terms.
QElement random_word(std::mt19937& g, const HbarPresentation& A, int terms = 2) {
  QElement out;
  for (int a = 0; a < terms; ++a) {
    QElement w = A.one();
    const int len = uniform(g, 1, 3);
    for (int q = 0; q < len; ++q) {
      const int i = uniform(g, 0, A.size() - 1);
      const int p = A.invertible()[i] ? uniform(g, -2, 2) : uniform(g, 1, 2);
      w = A.mul(w, A.gen(i, p));
    }
    out = A.add(out, A.scale(w, rational(g, 3)));
  }
  return out;
}

// Homogeneous word: a single product, so its weight is the sum of its letters.
QElement random_monomial_word(std::mt19937& g, const HbarPresentation& A) { return random_word(g, A, 1); }

// hbar^{-1} a, assuming every term carries hbar.
QElement divide_hbar(const QElement& a) {
  QElement out;
  for (auto& [m, c] : a) {
    REQUIRE(m.hbar >= 1);
    QMono n = m;
    --n.hbar;
    out[n] = c;
  }
  return out;
}

}  // namespace

TEST_CASE("normal forms are idempotent and products are bilinear") {
  auto g = rng_for(51);
  for (auto& f : families()) {
    const HbarPresentation& A = f.A;
    for (int trial = 0; trial < 10; ++trial) {
      QElement a = random_word(g, A), b = random_word(g, A), c = random_word(g, A);
      CHECK(A.parse(A.to_string(a)) == a);
      CHECK(A.mul(a, A.one()) == a);
      CHECK(A.mul(A.add(a, b), c) == A.add(A.mul(a, c), A.mul(b, c)));
      CHECK(A.mul(A.mul(a, b), c) == A.mul(a, A.mul(b, c)));
    }
  }
}

TEST_CASE("rewriting preserves weights") {
  auto g = rng_for(52);
  for (auto& f : families()) {
    const HbarPresentation& A = f.A;
    for (int i = 0; i < A.size(); ++i)
      for (int j = i + 1; j < A.size(); ++j) {
        const QElement& c = A.commutator_rule(j, i);
        if (!c.empty()) CHECK(A.weight(c) == A.weights()[i] + A.weights()[j]);
      }
    for (int trial = 0; trial < 10; ++trial) {
      QElement a = random_monomial_word(g, A), b = random_monomial_word(g, A);
      auto wa = A.weight(a), wb = A.weight(b);
      REQUIRE(wa);
      REQUIRE(wb);
      QElement p = A.mul(a, b);
      if (!p.empty()) CHECK(A.weight(p) == *wa + *wb);
    }
  }
}

TEST_CASE("commutators reduce to the Poisson bracket of symbols") {
  auto g = rng_for(53);
  for (auto& f : families()) {
    const HbarPresentation& A = f.A;
    const ContextPtr& ctx = f.P.context();
    CHECK(quantization_axiom_check(A, f.P).pass);
    for (int trial = 0; trial < 10; ++trial) {
      QElement a = random_word(g, A), b = random_word(g, A);
      TruncatedElement lhs = symbol(A, divide_hbar(A.commutator(a, b)), ctx);
      TruncatedElement rhs = bracket(f.P, symbol(A, a, ctx), symbol(A, b, ctx));
      CHECK(vanishes_mod(lhs - rhs, bracket_precision(ctx)));
    }
  }
}

TEST_CASE("quantized slices are closed under products") {
  HbarPresentation A = tensor(build_d(1, 2), build_weyl(2, 2));
  QuantSliceOptions opt;
  opt.weight_min = 0;
  opt.weight_max = 2;
  QuantSliceResult r = quantized_slice(A, A.parse("t"), {}, opt);
  CHECK(r.product_closed);
  auto g = rng_for(54);
  for (int trial = 0; trial < 10; ++trial) {
    auto& b1 = r.blocks[uniform(g, 0, static_cast<int>(r.blocks.size()) - 1)];
    auto& b2 = r.blocks[uniform(g, 0, static_cast<int>(r.blocks.size()) - 1)];
    if (b1.basis.empty() || b2.basis.empty()) continue;
    QElement x = b1.basis[uniform(g, 0, static_cast<int>(b1.basis.size()) - 1)];
    QElement y = b2.basis[uniform(g, 0, static_cast<int>(b2.basis.size()) - 1)];
    CHECK(in_joint_kernel(A, A.mul(x, y), A.parse("t"), {}));
  }
}

TEST_CASE("conjugation preserves the joint kernel") {
  auto g = rng_for(55);
  HbarPresentation A = tensor(build_d(1, 2), build_weyl(2, 2));
  QElement t = A.parse("t");
  std::vector<QElement> kernel{A.parse("t^-2*z1"), A.parse("z2"), A.parse("t^-2*z1*z2 + 3*z2^2")};
  for (int trial = 0; trial < 5; ++trial) {
    // weight -|hbar| conjugator so that the conjugated t stays homogeneous
    QElement w = A.add(A.scale(A.parse("t^-4*z1*z2"), rational(g, 3)), A.scale(A.parse("t^-2*u*z2^2"), rational(g, 3)));
    QElement tc = conjugate_by_exp(A, w, t);
    CHECK(A.weight(tc) == A.weight(t));
    for (auto& x : kernel) CHECK(in_joint_kernel(A, conjugate_by_exp(A, w, x), tc, {}));
  }
}

TEST_CASE("overlaps resolve in tensor products") {
  for (int k : {1, 2}) {
    CHECK(overlap_check(build_d(2, k)).empty());
    CHECK(overlap_check(tensor(build_d(1, k), build_weyl(2, k))).empty());
  }
}
