#include "doctest.h"

#include <algorithm>

#include "equislice/darboux.hpp"
#include "equislice/fixtures.hpp"
#include "random_gen.hpp"
#include "scramble.hpp"

using namespace equislice;
using namespace equislice::testgen;

namespace {

bool same_table(const PoissonPresentation& P, const PoissonPresentation& Q, int prec) {
  for (int i = 0; i < P.size(); ++i)
    for (int j = i + 1; j < P.size(); ++j)
      if (!vanishes_mod(P.entry(i, j) - Q.entry(i, j).in_context(P.context()), prec)) return false;
  return true;
}

// Random weight-0 element of J-order >= 2 built from t and the given variables.
TruncatedElement weight_zero(std::mt19937& g, const PoissonPresentation& P, const std::vector<int>& vars) {
  const ContextPtr& ctx = P.context();
  TruncatedElement out(ctx);
  for (int a = 0; a < 3; ++a) {
    Mono m;
    const int d = uniform(g, 2, 3);
    for (int q = 0; q < d; ++q) ++m.e[vars[uniform(g, 0, static_cast<int>(vars.size()) - 1)]];
    m.e[0] = static_cast<int8_t>(-ctx->weight(m));
    out += TruncatedElement::monomial(ctx, m, rational(g));
  }
  return out;
}

// The certificate's coordinates, as a change on the base presentation at the target order.
CoordinateChange certificate_change(const DecompositionCertificate& c) {
  PoissonPresentation base = c.base.with_order(c.order);
  CoordinateChange out;
  for (auto& x : c.coordinates) out.images.push_back(x.in_context(base.context()));
  return out;
}

}  // namespace

TEST_CASE("straighten_t produces Poisson automorphisms") {
  auto g = rng_for(21);
  for (int k : {0, 1, 2}) {
    PoissonPresentation P = standard_presentation(2, k, 1, 6);
    const int prec = bracket_precision(P.context());
    for (int trial = 0; trial < 4; ++trial) {
      auto tau = P.var("t") * (P.one() + weight_zero(g, P, {1, 2, 3}));
      CoordinateChange c = straighten_t(P, tau, 1);
      CHECK(vanishes_mod(c.images[0] - tau, prec));
      CHECK(check_poisson_morphism(P, P, c, prec).empty());
    }
  }
}

TEST_CASE("decouple_u removes random couplings") {
  auto g = rng_for(22);
  for (int k : {0, 1, 2}) {
    PoissonPresentation P = standard_presentation(2, k, 1, 6);
    const int prec = bracket_precision(P.context());
    for (int trial = 0; trial < 4; ++trial) {
      std::vector<TruncatedElement> images{P.var(0), P.var(1) + weight_zero(g, P, {2, 3}), P.var(2), P.var(3)};
      PoissonPresentation Q = transform(P, make_change(images));
      CHECK(enforce_tu(Q, 1).is_identity());
      CoordinateChange d = decouple_u(Q, 1, detect_pairs(Q, {2, 3}, prec));
      PoissonPresentation R = transform(Q, d);
      CHECK(check_poisson_morphism(Q, R, d, prec).empty());
      CHECK(same_table(R, P, prec));
    }
  }
}

TEST_CASE("scrambled products round-trip") {
  std::mt19937_64 rng(23);
  for (int slice_n : {0, 2, 3}) {
    PoissonPresentation P = product_fixture(slice_n, 7);
    for (int trial = 0; trial < 3; ++trial) {
      CoordinateChange flow = random_flow(P, rng);
      CHECK(same_table(transform(P, flow), P, bracket_precision(P.context())));
      CoordinateChange s = compose(flow, random_scramble(P.context(), 0, rng));
      PoissonPresentation Q = transform(P, s);
      auto cert = normalize_full(Q, 5);
      CHECK(cert.leaf_block_standard);
      CHECK(cert.couplings_vanish);
      CHECK(cert.product);
      for (auto& x : cert.xi) CHECK(x.is_zero());
      CHECK(check_poisson_morphism(Q.with_order(5), cert.result, certificate_change(cert),
                                   bracket_precision(cert.result.context()))
                .empty());
      if (slice_n == 0) {
        CHECK(cert.slice.generators.empty());
        continue;
      }
      // the recovered slice matches the original up to automorphism
      PoissonPresentation S = kleinian_slice(slice_n, 5);
      REQUIRE(cert.slice.generators.size() == 3);
      auto wa = cert.slice.slice.context()->weights, wb = S.context()->weights;
      std::sort(wa.begin(), wa.end());
      std::sort(wb.begin(), wb.end());
      CHECK(wa == wb);
      CHECK(hp0_graded(cert.slice.slice, 6).dims == hp0_graded(S, 6).dims);
      for (int w = 0; w <= 6; ++w) {
        auto a = poisson_center_basis(cert.slice.slice, w, w);
        auto b = poisson_center_basis(S, w, w);
        CHECK(a.size() == b.size());
        if (!a.empty() && !b.empty()) CHECK(a[0].basis.size() == b[0].basis.size());
      }
    }
  }
}

TEST_CASE("normalize_full is idempotent on its output") {
  std::mt19937_64 rng(24);
  PoissonPresentation P = product_fixture(2, 7);
  auto first = normalize_full(transform(P, random_scramble(P.context(), 0, rng)), 5);
  REQUIRE(first.product);
  auto again = normalize_full(first.result, 5);
  CHECK(again.product);
  CHECK(same_table(again.result, first.result, bracket_precision(first.result.context())));
  for (auto& st : again.stages) CHECK(st.identity);
}

TEST_CASE("certificate coordinates are weight homogeneous") {
  std::mt19937_64 rng(25);
  PoissonPresentation P = product_fixture(3, 7);
  for (int trial = 0; trial < 3; ++trial) {
    auto cert = normalize_full(transform(P, random_scramble(P.context(), 0, rng)), 5);
    const auto& w = P.context()->weights;
    for (size_t i = 0; i < cert.coordinates.size(); ++i) {
      REQUIRE(cert.coordinates[i].is_homogeneous());
      CHECK(cert.coordinates[i].weight() == w[i]);
    }
    CHECK(cert.k * cert.ell == 2);
    CHECK(cert.result.entry(2, 3).is_homogeneous());
  }
}
