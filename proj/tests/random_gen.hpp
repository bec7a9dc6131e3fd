// Seeded generators for the property suites.
#pragma once

#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "equislice/element.hpp"
#include "equislice/intmatrix.hpp"
#include "equislice/scalar.hpp"

namespace equislice::testgen {

// Seed from EQUISLICE_TEST_SEED when set, so failures can be replayed.
inline std::mt19937 rng_for(unsigned salt) {
  unsigned seed = 20261015u;
  if (const char* s = std::getenv("EQUISLICE_TEST_SEED")) seed = static_cast<unsigned>(std::strtoul(s, nullptr, 10));
  return std::mt19937(seed ^ (salt * 2654435761u));
}

inline int uniform(std::mt19937& g, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g); }

inline Scalar rational(std::mt19937& g, int span = 5) {
  int num = 0;
  while (num == 0) num = uniform(g, -span, span);
  return Scalar(num, uniform(g, 1, 3));
}

inline Scalar cyclotomic(std::mt19937& g, int n) {
  Scalar out(0);
  for (int i = 0; i < n; ++i)
    if (uniform(g, 0, 1)) out += rational(g) * Scalar::zeta(n, i);
  return out;
}

// Random monomial: exponents in [0, max_exp] on ordinary variables, [-max_exp, max_exp] on invertible ones.
inline Mono monomial(std::mt19937& g, const GradedContext& ctx, int max_exp) {
  Mono m;
  for (int i = 0; i < ctx.size(); ++i)
    m.e[i] = static_cast<int8_t>(ctx.invertible[i] ? uniform(g, -max_exp, max_exp) : uniform(g, 0, max_exp));
  return m;
}

inline TruncatedElement element(std::mt19937& g, const ContextPtr& ctx, int terms, int max_exp = 2) {
  std::vector<Term> ts;
  for (int a = 0; a < terms; ++a) ts.push_back({monomial(g, *ctx, max_exp), rational(g)});
  return TruncatedElement::from_terms(ctx, ts);
}

// Homogeneous of weight w: random monomials shifted by a power of the first positive-weight
// invertible variable when needed, otherwise filtered by weight.
inline TruncatedElement homogeneous(std::mt19937& g, const ContextPtr& ctx, int w, int terms, int max_exp = 2) {
  int shift = -1;
  for (int i = 0; i < ctx->size(); ++i)
    if (ctx->invertible[i] && ctx->weights[i] == 1) shift = i;
  std::vector<Term> ts;
  for (int attempt = 0; attempt < 64 * terms && static_cast<int>(ts.size()) < terms; ++attempt) {
    Mono m = monomial(g, *ctx, max_exp);
    int d = w - ctx->weight(m);
    if (shift >= 0) {
      m.e[shift] = static_cast<int8_t>(m.e[shift] + d);
      d = 0;
    }
    if (d == 0) ts.push_back({m, rational(g)});
  }
  return TruncatedElement::from_terms(ctx, ts);
}

inline IntMatrix int_matrix(std::mt19937& g, int rows, int cols, int lo, int hi) {
  IntMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = uniform(g, lo, hi);
  return m;
}

}  // namespace equislice::testgen
