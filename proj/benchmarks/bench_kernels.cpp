// Timing kernels for the hot paths: truncated products, Jacobi, normalization, leaves, rewriting.
#include <benchmark/benchmark.h>

#include <random>

#include "equislice/darboux.hpp"
#include "equislice/fixtures.hpp"
#include "equislice/hypertoric.hpp"
#include "equislice/intmatrix.hpp"
#include "equislice/poisson.hpp"
#include "equislice/quantization.hpp"
#include "equislice/quotient.hpp"

using namespace equislice;

static void BM_TruncatedProduct(benchmark::State& state) {
  PoissonPresentation P = standard_presentation(2, 2, 1, static_cast<int>(state.range(0)));
  TruncatedElement a = parse_element(P.context(), "t + u*z1 + z1*z2 + u^2*z2");
  TruncatedElement b = parse_element(P.context(), "t^-1 + u + z1^2 - z2*u");
  for (auto _ : state) {
    TruncatedElement c = a;
    for (int i = 0; i < 4; ++i) c = c * b;
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_TruncatedProduct)->Arg(4)->Arg(6)->Arg(8);

static void BM_Jacobi(benchmark::State& state) {
  PoissonPresentation P = standard_presentation(static_cast<int>(state.range(0)), 2, 1, 6);
  for (auto _ : state) benchmark::DoNotOptimize(check_jacobi(P));
}
BENCHMARK(BM_Jacobi)->DenseRange(1, 3);

static void BM_NormalizeScrambled(benchmark::State& state) {
  PoissonPresentation P = product_presentation(standard_presentation(2, 2, 1, 7), kleinian_slice(2, 7));
  std::mt19937_64 rng(11);
  PoissonPresentation Q = transform(P, random_scramble(P.context(), 0, rng));
  for (auto _ : state) benchmark::DoNotOptimize(normalize_full(Q, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_NormalizeScrambled)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

static void BM_CenterBasis(benchmark::State& state) {
  PoissonPresentation P = counterex1_presentation(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(poisson_center_basis(P, 0, 2));
}
BENCHMARK(BM_CenterBasis)->Arg(6)->Arg(8);

static void BM_HypertoricLeaves(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<std::vector<long>> rows;
  for (int i = 0; i < n; ++i) rows.push_back({i % 2 == 0 ? 1L : 0L, i % 2 == 1 ? 1L : 0L});
  TorusActionMatrix A{IntMatrix(rows)};
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_leaves(A));
}
BENCHMARK(BM_HypertoricLeaves)->DenseRange(4, 10, 2);

static void BM_SmithNormalForm(benchmark::State& state) {
  std::mt19937 g(5);
  std::uniform_int_distribution<long> d(-3, 3);
  const int n = static_cast<int>(state.range(0));
  std::vector<std::vector<long>> rows(n, std::vector<long>(n));
  for (auto& r : rows)
    for (auto& x : r) x = d(g);
  IntMatrix M(rows);
  for (auto _ : state) benchmark::DoNotOptimize(smith_normal_form(M));
}
BENCHMARK(BM_SmithNormalForm)->Arg(4)->Arg(5)->Arg(6);

static void BM_GroupClosure(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  ExactMatrix r(2, 2), s(2, 2);
  r(0, 0) = Scalar::zeta(2 * n);
  r(1, 1) = Scalar::zeta(2 * n).inverse();
  s(0, 1) = Scalar(-1);
  s(1, 0) = Scalar(1);
  for (auto _ : state) {
    GroupData G = close_group({r, s.lifted(2 * n)}, standard_symplectic_form(2));
    benchmark::DoNotOptimize(parabolic_subgroups(G));
  }
}
BENCHMARK(BM_GroupClosure)->Arg(2)->Arg(4)->Arg(6);

static void BM_CasimirCentrality(benchmark::State& state) {
  HbarPresentation U = build_enveloping(sl2_structure_constants(), 3);
  QElement C = U.parse("e*f + f*e + 1/2*h*h");
  for (auto _ : state) benchmark::DoNotOptimize(centrality_check(U, C, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_CasimirCentrality)->Arg(4)->Arg(6);

BENCHMARK_MAIN();
