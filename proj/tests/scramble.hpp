// Weight-preserving scrambles of standard x slice presentations for round-trip tests.
#pragma once

#include <random>
#include <vector>

#include "equislice/darboux.hpp"
#include "equislice/fixtures.hpp"

namespace equislice::testgen {

// Truncated Hamiltonian flow exp(xi_H) for a random H of weight k*ell and J-order >= 3.
// Such a flow is a Poisson automorphism, so it leaves the table unchanged.
inline CoordinateChange random_flow(const PoissonPresentation& P, std::mt19937_64& rng) {
  const ContextPtr& ctx = P.context();
  const LeafShape s = leaf_shape(P);
  std::vector<int> filt;
  for (int i = 0; i < ctx->size(); ++i)
    if (ctx->filtration[i]) filt.push_back(i);
  TruncatedElement H(ctx);
  for (int a = 0; a < 3; ++a) {
    for (int attempt = 0; attempt < 32; ++attempt) {
      Mono m;
      const int d = 3 + static_cast<int>(rng() % 2);
      for (int q = 0; q < d; ++q) ++m.e[filt[rng() % filt.size()]];
      const int rem = s.k * s.ell - ctx->weight(m);
      if (rem % s.ell != 0) continue;
      m.e[s.t] = static_cast<int8_t>(rem / s.ell);
      H += TruncatedElement::monomial(ctx, m, Scalar(static_cast<long>(rng() % 5) - 2, 1 + static_cast<long>(rng() % 2)));
      break;
    }
  }
  std::vector<TruncatedElement> images;
  for (int i = 0; i < ctx->size(); ++i) images.push_back(hamiltonian_flow(P, H, P.var(i), ctx->order));
  CoordinateChange c = make_change(images);
  c.is_hamiltonian_flow = true;
  c.generator = H;
  return c;
}

// standard(2,k) x slice at order `order`; slice_n = 0 means no slice.
inline PoissonPresentation product_fixture(int slice_n, int order, int k = 2) {
  PoissonPresentation P = standard_presentation(2, k, 1, order);
  if (slice_n > 0) P = product_presentation(P, kleinian_slice(slice_n, order));
  return P;
}

}  // namespace equislice::testgen
